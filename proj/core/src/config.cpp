#include "infogather/harness/config.hpp"

#include "config_json.hpp"
#include "infogather/core/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace infogather::harness {
namespace {

/// Reads a YAML mapping, remembering which keys were consumed so that
/// anything left over can be reported as unknown.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(where() + " must be a mapping");
  }

  bool has(const std::string& key) const { return node_ && !node_.IsNull() && node_[key]; }

  /// The value for `key`, or an undefined node if it is absent or null.
  YAML::Node take(const std::string& key) {
    used_.insert(key);
    if (!has(key) || node_[key].IsNull()) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    const YAML::Node n = take(key);
    if (!n) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("invalid value for '" + join(key) + "'");
    }
  }

  void get_list(const std::string& key, std::optional<std::vector<double>>& out) {
    const YAML::Node n = take(key);
    if (!n) return;
    out = as_numbers(n, join(key));
  }

  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!used_.count(key)) throw ConfigError("unknown key '" + join(key) + "'");
    }
  }

  static std::vector<double> as_numbers(const YAML::Node& n, const std::string& where) {
    try {
      if (n.IsScalar()) return {n.as<double>()};
      if (n.IsSequence()) return n.as<std::vector<double>>();
    } catch (const YAML::Exception&) {
    }
    throw ConfigError("'" + where + "' must be a number or a list of numbers");
  }

 private:
  std::string where() const { return path_.empty() ? "config" : "'" + path_ + "'"; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

Vec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Mat noise_matrix(const std::vector<double>& v, int n, const std::string& what) {
  const auto size = static_cast<int>(v.size());
  if (size == 1) return v[0] * Mat::Identity(n, n);
  if (size == n) return to_vec(v).asDiagonal();
  if (size == n * n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
  }
  throw ConfigError(what + " needs 1, " + std::to_string(n) + " or " + std::to_string(n * n) +
                    " entries, got " + std::to_string(size));
}

systems::ParamValue param_value(const YAML::Node& n, const std::string& where) {
  if (n.IsSequence()) return MapReader::as_numbers(n, where);
  if (n.IsScalar()) {
    try {
      return n.as<double>();
    } catch (const YAML::Exception&) {
      return n.as<std::string>();
    }
  }
  throw ConfigError("'" + where + "' must be a number, list or string");
}

void read_system(const YAML::Node& node, SystemConfig& sys) {
  MapReader r(node, "system");
  r.get("id", sys.id);
  const YAML::Node params = r.take("params");
  if (params && !params.IsNull()) {
    if (!params.IsMap()) throw ConfigError("'system.params' must be a mapping");
    for (const auto& kv : params) {
      const std::string key = kv.first.as<std::string>();
      sys.params[key] = param_value(kv.second, "system.params." + key);
    }
  }
  r.get_list("state_noise", sys.state_noise);
  r.get_list("param_noise", sys.param_noise);
  r.get_list("initial_state", sys.initial_state);
  r.get_list("theta_true", sys.theta_true);
  r.finish();
}

void read_planner(const YAML::Node& node, planner::CemConfig& p) {
  MapReader r(node, "planner");
  r.get("horizon", p.horizon);
  r.get("population", p.population);
  r.get("elites", p.elites);
  r.get("iterations", p.iterations);
  std::optional<std::vector<double>> init_std;
  r.get_list("init_std", init_std);
  if (init_std) p.init_std = to_vec(*init_std);
  r.get("momentum", p.momentum);
  r.get("min_std", p.min_std);
  r.get("threads", p.threads);
  r.finish();
}

void read_heldout(const YAML::Node& node, HeldoutConfig& h) {
  MapReader r(node, "heldout");
  r.get("n_transitions", h.n_transitions);
  r.get("n_trajectories", h.n_trajectories);
  r.get("traj_length", h.traj_length);
  r.get("policy", h.policy);
  r.get("eval_every", h.eval_every);
  r.finish();
}

void read_directed_info(const YAML::Node& node, infocost::DirectedInfoConfig& d) {
  MapReader r(node, "directed_info");
  r.get("n_belief_samples", d.n_belief_samples);
  r.get("n_noise_samples", d.n_noise_samples);
  r.get("n_eval_components", d.n_eval_components);
  r.finish();
}

void read_task(const YAML::Node& node, infocost::TaskCostSpec& t) {
  MapReader r(node, "task");
  std::string type = infocost::to_string(t.kind);
  r.get("type", type);
  t.kind = infocost::parse_task_kind(type);
  std::optional<std::vector<double>> goal, weights;
  r.get_list("goal", goal);
  r.get_list("weights", weights);
  if (goal) t.goal = to_vec(*goal);
  if (weights) t.weights = to_vec(*weights);
  r.get("ref_angle", t.ref_angle);
  r.get("control_effort_weight", t.control_effort_weight);
  r.finish();
}

ExperimentConfig from_yaml(const YAML::Node& root) {
  ExperimentConfig cfg;
  MapReader r(root, "");
  r.get("experiment", cfg.experiment);
  read_system(r.take("system"), cfg.system);
  r.get("episode_length", cfg.episode_length);
  read_planner(r.take("planner"), cfg.planner);
  if (const YAML::Node n = r.take("lambda_values")) cfg.lambda_values = MapReader::as_numbers(n, "lambda_values");
  if (const YAML::Node n = r.take("baselines")) {
    try {
      cfg.baselines = n.IsSequence() ? n.as<std::vector<std::string>>()
                                     : std::vector<std::string>{n.as<std::string>()};
    } catch (const YAML::Exception&) {
      throw ConfigError("'baselines' must be a list of names");
    }
  }
  if (const YAML::Node n = r.take("seeds")) {
    try {
      cfg.seeds = n.IsSequence() ? n.as<std::vector<std::uint64_t>>()
                                 : std::vector<std::uint64_t>{n.as<std::uint64_t>()};
    } catch (const YAML::Exception&) {
      throw ConfigError("'seeds' must be a list of non-negative integers");
    }
  }
  r.get("prior_std", cfg.prior_std);
  read_heldout(r.take("heldout"), cfg.heldout);
  std::string variant = infocost::to_string(cfg.info_variant);
  r.get("info_variant", variant);
  cfg.info_variant = infocost::parse_info_variant(variant);
  read_directed_info(r.take("directed_info"), cfg.directed_info);
  read_task(r.take("task"), cfg.task);
  r.get("output_dir", cfg.output_dir);
  r.get("record_timing", cfg.record_timing);
  r.finish();
  return cfg;
}

void apply_override(YAML::Node& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must look like key.path=value");
  }
  const std::string path = assignment.substr(0, eq);
  YAML::Node value;
  try {
    value = YAML::Load(assignment.substr(eq + 1));
  } catch (const YAML::Exception& e) {
    throw ConfigError("override '" + assignment + "': " + e.what());
  }
  std::vector<std::string> keys;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError("override '" + assignment + "' has an empty key");
    keys.push_back(part);
  }
  // yaml-cpp nodes are handles, so walking with operator[] and reassigning
  // would rebind rather than descend; recurse instead.
  std::function<void(YAML::Node, std::size_t)> set = [&](YAML::Node node, std::size_t i) {
    if (!node.IsMap() && !node.IsNull()) {
      throw ConfigError("override '" + assignment + "': '" + keys[i - 1] + "' is not a mapping");
    }
    if (i + 1 == keys.size()) {
      node[keys[i]] = value;
      return;
    }
    if (!node[keys[i]]) node[keys[i]] = YAML::Node(YAML::NodeType::Map);
    set(node[keys[i]], i + 1);
  };
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  set(root, 0);
}

std::string format_lambda(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string Condition::label() const { return random ? "random" : "lambda=" + format_lambda(lambda); }

std::vector<Condition> conditions(const ExperimentConfig& cfg) {
  std::vector<Condition> out;
  const auto wants = [&](const char* name) {
    return std::find(cfg.baselines.begin(), cfg.baselines.end(), name) != cfg.baselines.end();
  };
  if (wants("random")) out.push_back({true, 0.0});
  std::vector<double> lambdas = cfg.lambda_values;
  if (wants("passive") && std::find(lambdas.begin(), lambdas.end(), 0.0) == lambdas.end()) {
    lambdas.insert(lambdas.begin(), 0.0);
  }
  for (double l : lambdas) {
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Condition& c) { return !c.random && c.lambda == l; });
    if (!dup) out.push_back({false, l});
  }
  return out;
}

std::unique_ptr<systems::SystemModel> make_system(const SystemConfig& cfg) {
  systems::SystemSpec spec{cfg.id, cfg.params, {}};
  // Build once with defaults to learn the dimensions the overrides must match.
  const auto probe = systems::make_system(spec);
  if (cfg.state_noise) spec.common.state_noise = noise_matrix(*cfg.state_noise, probe->state_dim(), "system.state_noise");
  if (cfg.param_noise) spec.common.param_noise = noise_matrix(*cfg.param_noise, probe->param_dim(), "system.param_noise");
  if (cfg.initial_state) spec.common.initial_state = to_vec(*cfg.initial_state);
  if (cfg.theta_true) spec.common.theta_true = to_vec(*cfg.theta_true);
  try {
    return systems::make_system(spec);
  } catch (const DimensionMismatch& e) {
    throw ConfigError(std::string("system override: ") + e.what());
  }
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.episode_length < 1) throw ConfigError("episode_length must be >= 1");
  if (cfg.seeds.empty()) throw ConfigError("at least one seed is required");
  for (double l : cfg.lambda_values) {
    if (!std::isfinite(l) || l < 0.0) throw ConfigError("lambda_values must be finite and >= 0");
  }
  for (const auto& b : cfg.baselines) {
    if (b != "random" && b != "passive") throw ConfigError("unknown baseline '" + b + "'");
  }
  if (conditions(cfg).empty()) throw ConfigError("no conditions to run");
  if (!(cfg.prior_std >= 0.0) || !std::isfinite(cfg.prior_std)) throw ConfigError("prior_std must be >= 0");
  const auto& h = cfg.heldout;
  if (h.n_transitions < 0 || h.n_trajectories < 0 || h.traj_length < 1 || h.eval_every < 0) {
    throw ConfigError("heldout counts must be non-negative and traj_length >= 1");
  }
  if (h.n_transitions == 0 && h.n_trajectories == 0) {
    throw ConfigError("heldout needs transitions or trajectories");
  }
  if (h.policy != "random") throw ConfigError("heldout.policy must be 'random'");
  infocost::validate(cfg.directed_info);
  const auto sys = make_system(cfg.system);
  planner::validate(cfg.planner, sys->control_dim());
  try {
    infocost::validate(cfg.task, sys->state_dim());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(std::string("task: ") + e.what());
  }
}

ExperimentConfig parse_config(const std::string& yaml_text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  for (const auto& o : overrides) apply_override(root, o);
  ExperimentConfig cfg = from_yaml(root);
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

namespace detail {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  using nlohmann::ordered_json;
  auto vec = [](const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  ordered_json sys;
  sys["id"] = cfg.system.id;
  ordered_json params = ordered_json::object();
  for (const auto& [k, v] : cfg.system.params) {
    std::visit([&](const auto& x) { params[k] = x; }, v);
  }
  sys["params"] = params;
  auto opt = [](const std::optional<std::vector<double>>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  sys["state_noise"] = opt(cfg.system.state_noise);
  sys["param_noise"] = opt(cfg.system.param_noise);
  sys["initial_state"] = opt(cfg.system.initial_state);
  sys["theta_true"] = opt(cfg.system.theta_true);

  const auto& p = cfg.planner;
  ordered_json planner{{"horizon", p.horizon},     {"population", p.population},
                       {"elites", p.elites},       {"iterations", p.iterations},
                       {"init_std", p.init_std ? ordered_json(vec(*p.init_std)) : ordered_json(nullptr)},
                       {"momentum", p.momentum},   {"min_std", p.min_std},
                       {"threads", p.threads}};
  const auto& h = cfg.heldout;
  ordered_json heldout{{"n_transitions", h.n_transitions},
                       {"n_trajectories", h.n_trajectories},
                       {"traj_length", h.traj_length},
                       {"policy", h.policy},
                       {"eval_every", h.eval_every}};
  const auto& d = cfg.directed_info;
  ordered_json di{{"n_belief_samples", d.n_belief_samples},
                  {"n_noise_samples", d.n_noise_samples},
                  {"n_eval_components", d.n_eval_components}};
  const auto& t = cfg.task;
  ordered_json task{{"type", infocost::to_string(t.kind)},
                    {"goal", vec(t.goal)},
                    {"weights", vec(t.weights)},
                    {"ref_angle", t.ref_angle},
                    {"control_effort_weight", t.control_effort_weight}};

  ordered_json out;
  out["experiment"] = cfg.experiment;
  out["system"] = sys;
  out["episode_length"] = cfg.episode_length;
  out["planner"] = planner;
  out["lambda_values"] = cfg.lambda_values;
  out["baselines"] = cfg.baselines;
  out["seeds"] = cfg.seeds;
  out["prior_std"] = cfg.prior_std;
  out["heldout"] = heldout;
  out["info_variant"] = infocost::to_string(cfg.info_variant);
  out["directed_info"] = di;
  out["task"] = task;
  out["output_dir"] = cfg.output_dir;
  out["record_timing"] = cfg.record_timing;
  return out;
}

}  // namespace detail

std::string config_to_json(const ExperimentConfig& cfg) { return detail::config_json(cfg).dump(2); }

}  // namespace infogather::harness
