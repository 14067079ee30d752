#include "ddekoop/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "ddekoop/dde.hpp"
#include "ddekoop/error.hpp"

namespace ddekoop {

using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw Error(ErrorKind::Config, "invalid key '" + key + "': " + why);
}

template <typename T>
T get_as(const std::string& key, const ordered_json& v) {
  try {
    return v.get<T>();
  } catch (const ordered_json::exception&) {
    bad_key(key, "wrong type");
  }
}

double get_number(const std::string& key, const ordered_json& v) {
  if (!v.is_number()) bad_key(key, "expected a number");
  return v.get<double>();
}

std::size_t get_count(const std::string& key, const ordered_json& v) {
  if (!v.is_number_unsigned()) bad_key(key, "expected a non-negative integer");
  return v.get<std::size_t>();
}

template <typename F>
auto get_list(const std::string& key, const ordered_json& v, F element) {
  if (!v.is_array()) bad_key(key, "expected an array");
  std::vector<decltype(element(key, v))> out;
  for (const auto& e : v) out.push_back(element(key, e));
  return out;
}

}  // namespace

std::size_t ExperimentConfig::training_count(std::size_t m_index) const {
  if (!n_train.empty()) return n_train.at(m_index);
  const std::size_t per = full_scale ? 100 : 20;
  return per * (M.at(m_index) - 1);
}

void ExperimentConfig::validate() const {
  if (system != "hill" && system != "tumor" && system != "identity") {
    bad_key("system", "expected hill, tumor or identity");
  }
  if (M.empty()) bad_key("M", "list must be non-empty");
  for (std::size_t m : M) {
    if (m < 2) bad_key("M", "each entry must be >= 2");
  }
  if (p.empty() && fill_distance.empty()) bad_key("p", "list must be non-empty");
  for (std::size_t v : p) {
    if (v == 0) bad_key("p", "entries must be positive");
  }
  for (double h : fill_distance) {
    if (!(h > 0.0)) bad_key("fill_distance", "entries must be positive");
  }
  if (rho.empty()) bad_key("rho", "list must be non-empty");
  for (double r : rho) {
    if (!(r > 0.0)) bad_key("rho", "entries must be positive");
  }
  if (!(horizon > 0.0)) bad_key("horizon", "must be positive");
  if (!(sample_interval > 0.0)) bad_key("sample_interval", "must be positive");
  if (!(step > 0.0)) bad_key("step", "must be positive");
  if (!n_train.empty() && n_train.size() != M.size()) {
    bad_key("n_train", "needs one entry per value of M");
  }
  for (std::size_t n : n_train) {
    if (n == 0) bad_key("n_train", "entries must be positive");
  }
  if (n_test < 1) bad_key("n_test", "must be >= 1");
  if (train_seed == test_seed) bad_key("test_seed", "must differ from train_seed");
  for (const auto& [lo, hi] : bounds) {
    if (!(lo <= hi)) bad_key("bounds", "each pair must satisfy lo <= hi");
  }
  if (!(scale_multiple > 0.0)) bad_key("scale_multiple", "must be positive");
  if (output_dir.empty()) bad_key("output_dir", "must be non-empty");
}

ExperimentConfig parse_config(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const ordered_json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");

  ExperimentConfig c;
  bool has_system = false;
  for (const auto& [key, v] : doc.items()) {
    if (key == "system") {
      c.system = get_as<std::string>(key, v);
      if (c.system != "hill" && c.system != "tumor" && c.system != "identity") {
        bad_key(key, "expected hill, tumor or identity");
      }
      has_system = true;
    } else if (key == "delay") {
      c.delay = get_number(key, v);
    } else if (key == "horizon") {
      c.horizon = get_number(key, v);
    } else if (key == "sample_interval") {
      c.sample_interval = get_number(key, v);
    } else if (key == "step") {
      c.step = get_number(key, v);
    } else if (key == "M") {
      c.M = get_list(key, v, get_count);
    } else if (key == "p") {
      c.p = get_list(key, v, get_count);
    } else if (key == "fill_distance") {
      c.fill_distance = get_list(key, v, get_number);
    } else if (key == "max_centers") {
      c.max_centers = get_count(key, v);
    } else if (key == "rho") {
      c.rho = get_list(key, v, get_number);
    } else if (key == "d") {
      c.d = get_count(key, v);
    } else if (key == "n_train") {
      if (!v.is_array()) bad_key(key, "expected an array with one count per M");
      c.n_train = get_list(key, v, get_count);
    } else if (key == "full_scale") {
      c.full_scale = get_as<bool>(key, v);
    } else if (key == "n_test") {
      c.n_test = get_count(key, v);
    } else if (key == "bounds") {
      if (!v.is_array()) bad_key(key, "expected an array of [lo, hi] pairs");
      for (const auto& pair : v) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number()) {
          bad_key(key, "expected an array of [lo, hi] pairs");
        }
        c.bounds.emplace_back(pair[0].get<double>(), pair[1].get<double>());
      }
    } else if (key == "train_seed") {
      c.train_seed = get_count(key, v);
    } else if (key == "test_seed") {
      c.test_seed = get_count(key, v);
    } else if (key == "center_seed") {
      c.center_seed = get_count(key, v);
    } else if (key == "strategy") {
      try {
        c.strategy = parse_center_strategy(get_as<std::string>(key, v));
      } catch (const Error&) {
        bad_key(key, "expected greedy_farthest, grid or random");
      }
    } else if (key == "neighbors") {
      try {
        c.neighbors = parse_neighbor_policy(get_as<std::string>(key, v));
      } catch (const Error&) {
        bad_key(key, "expected nearest, ball or spread");
      }
    } else if (key == "scale_multiple") {
      c.scale_multiple = get_number(key, v);
    } else if (key == "max_failed_fraction") {
      c.max_failed_fraction = get_number(key, v);
    } else if (key == "output_dir") {
      c.output_dir = get_as<std::string>(key, v);
    } else if (key == "plots") {
      c.plots = get_as<bool>(key, v);
    } else {
      bad_key(key, "unknown key");
    }
  }
  if (!has_system) bad_key("system", "required");
  if (c.bounds.empty()) {
    c.bounds = c.system == "identity" ? std::vector<std::pair<double, double>>{{0.0, 1.0}}
                                      : default_initial_bounds(c.system);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Config, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

}  // namespace ddekoop
