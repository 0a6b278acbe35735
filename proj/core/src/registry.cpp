#include "infogather/systems/registry.hpp"

#include "infogather/core/errors.hpp"
#include "infogather/systems/double_integrator.hpp"
#include "infogather/systems/pendulum.hpp"
#include "infogather/systems/pursuit_evasion.hpp"

#include <functional>

namespace infogather::systems {
namespace {

double as_double(const std::string& key, const ParamValue& value) {
  if (const auto* d = std::get_if<double>(&value)) return *d;
  if (const auto* v = std::get_if<std::vector<double>>(&value); v && v->size() == 1) return (*v)[0];
  throw ConfigError("system parameter '" + key + "' must be a number");
}

int as_int(const std::string& key, const ParamValue& value) {
  const double d = as_double(key, value);
  if (d != static_cast<double>(static_cast<int>(d))) {
    throw ConfigError("system parameter '" + key + "' must be an integer");
  }
  return static_cast<int>(d);
}

Vec as_vec(const std::string& key, const ParamValue& value, long expected) {
  const auto* v = std::get_if<std::vector<double>>(&value);
  if (!v || static_cast<long>(v->size()) != expected) {
    throw ConfigError("system parameter '" + key + "' must be a list of " +
                      std::to_string(expected) + " numbers");
  }
  return Eigen::Map<const Vec>(v->data(), static_cast<Eigen::Index>(v->size()));
}

using Setter = std::function<void(const ParamValue&)>;

void apply_params(const SystemSpec& spec, const std::map<std::string, Setter>& setters) {
  for (const auto& [key, value] : spec.params) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown parameter '" + key + "' for system '" + spec.id + "'");
    }
    it->second(value);
  }
}

std::map<std::string, Setter> double_integrator_setters(DoubleIntegrator::Params& p) {
  return {
      {"dt", [&](const ParamValue& v) { p.dt = as_double("dt", v); }},
      {"accel_limit", [&](const ParamValue& v) { p.accel_limit = as_double("accel_limit", v); }},
  };
}

std::map<std::string, Setter> pendulum_setters(DampedPendulum::Params& p) {
  return {
      {"dt", [&](const ParamValue& v) { p.dt = as_double("dt", v); }},
      {"mass", [&](const ParamValue& v) { p.mass = as_double("mass", v); }},
      {"gravity", [&](const ParamValue& v) { p.gravity = as_double("gravity", v); }},
      {"length", [&](const ParamValue& v) { p.length = as_double("length", v); }},
      {"damping", [&](const ParamValue& v) { p.damping = as_double("damping", v); }},
      {"inertia", [&](const ParamValue& v) { p.inertia = as_double("inertia", v); }},
      {"torque_limit", [&](const ParamValue& v) { p.torque_limit = as_double("torque_limit", v); }},
  };
}

std::map<std::string, Setter> pe_lqr_setters(PursuitEvasionLqr::Params& p) {
  return {
      {"dt", [&](const ParamValue& v) { p.dt = as_double("dt", v); }},
      {"accel_limit", [&](const ParamValue& v) { p.accel_limit = as_double("accel_limit", v); }},
      {"q_diag", [&](const ParamValue& v) { p.q_diag = as_vec("q_diag", v, 4); }},
      {"r_diag", [&](const ParamValue& v) { p.r_diag = as_vec("r_diag", v, 2); }},
  };
}

std::map<std::string, Setter> pe_mpc_setters(PursuitEvasionMpc::Params& p) {
  return {
      {"dt", [&](const ParamValue& v) { p.dt = as_double("dt", v); }},
      {"accel_limit", [&](const ParamValue& v) { p.accel_limit = as_double("accel_limit", v); }},
      {"omega_limit", [&](const ParamValue& v) { p.omega_limit = as_double("omega_limit", v); }},
      {"pursuer_accel_limit",
       [&](const ParamValue& v) { p.pursuer_accel_limit = as_double("pursuer_accel_limit", v); }},
      {"w", [&](const ParamValue& v) { p.weight = as_double("w", v); }},
      {"mpc_horizon", [&](const ParamValue& v) { p.mpc_horizon = as_int("mpc_horizon", v); }},
      {"mpc_iters", [&](const ParamValue& v) { p.mpc_iters = as_int("mpc_iters", v); }},
      {"mpc_step_size",
       [&](const ParamValue& v) { p.mpc_step_size = as_double("mpc_step_size", v); }},
      {"gradient",
       [&](const ParamValue& v) {
         const auto* s = std::get_if<std::string>(&v);
         if (s && *s == "analytic") {
           p.gradient = PursuitEvasionMpc::Gradient::kAnalytic;
         } else if (s && *s == "finite_difference") {
           p.gradient = PursuitEvasionMpc::Gradient::kFiniteDifference;
         } else {
           throw ConfigError("gradient must be 'analytic' or 'finite_difference'");
         }
       }},
  };
}

std::vector<std::string> keys(const std::map<std::string, Setter>& setters) {
  std::vector<std::string> out;
  for (const auto& [k, _] : setters) out.push_back(k);
  return out;
}

}  // namespace

std::unique_ptr<SystemModel> make_system(const SystemSpec& spec) {
  if (spec.id == "double_integrator") {
    DoubleIntegrator::Params p;
    apply_params(spec, double_integrator_setters(p));
    return std::make_unique<DoubleIntegrator>(p, spec.common);
  }
  if (spec.id == "pendulum") {
    DampedPendulum::Params p;
    apply_params(spec, pendulum_setters(p));
    return std::make_unique<DampedPendulum>(p, spec.common);
  }
  if (spec.id == "pe_lqr") {
    PursuitEvasionLqr::Params p;
    apply_params(spec, pe_lqr_setters(p));
    return std::make_unique<PursuitEvasionLqr>(p, spec.common);
  }
  if (spec.id == "pe_mpc") {
    PursuitEvasionMpc::Params p;
    apply_params(spec, pe_mpc_setters(p));
    return std::make_unique<PursuitEvasionMpc>(p, spec.common);
  }
  throw ConfigError("unknown system '" + spec.id + "'");
}

std::vector<SystemInfo> list_systems() {
  std::vector<SystemInfo> out;
  auto add = [&](const SystemModel& sys, std::string description, std::vector<std::string> names) {
    out.push_back({sys.name(), std::move(description), std::move(names), sys.dims(),
                   sys.param_layout()});
  };
  {
    DoubleIntegrator::Params p;
    add(DoubleIntegrator(p), "planar double integrator, theta = vec(A) | vec(B)",
        keys(double_integrator_setters(p)));
  }
  {
    DampedPendulum::Params p;
    add(DampedPendulum(p), "damped pendulum, theta = [b, L]", keys(pendulum_setters(p)));
  }
  {
    PursuitEvasionLqr::Params p;
    add(PursuitEvasionLqr(p), "pursuit-evasion, LQR pursuer, theta = chol(Q) | chol(R)",
        keys(pe_lqr_setters(p)));
  }
  {
    PursuitEvasionMpc::Params p;
    add(PursuitEvasionMpc(p), "pursuit-evasion, unicycle MPC pursuer, theta = [w]",
        keys(pe_mpc_setters(p)));
  }
  return out;
}

}  // namespace infogather::systems
