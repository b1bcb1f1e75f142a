/*
 * Copyright 2026 The polygam Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "run_config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "format.h"
#include "polygam/errors.h"

namespace polygam::cli {
namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string StripComment(std::string_view line) {
  const std::string_view t = Trim(line);
  if (t.empty() || t.front() == '#' || t.front() == ';') return {};
  std::size_t cut = std::string_view::npos;
  for (std::size_t p = 1; p < line.size(); ++p) {
    if ((line[p] == '#' || line[p] == ';') &&
        (line[p - 1] == ' ' || line[p - 1] == '\t')) {
      cut = p;
      break;
    }
  }
  return std::string(Trim(line.substr(0, cut)));
}

class Parser {
 public:
  explicit Parser(std::vector<std::string>& errors) : errors_(errors) {}

  template <typename T>
  void Number(std::string_view where, std::string_view text, T& out) {
    T value{};
    std::string_view t = Trim(text);
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      errors_.push_back(std::string(where) + ": '" + std::string(text) +
                        "' is not a valid number");
      return;
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(value)) {
        errors_.push_back(std::string(where) + ": value must be finite");
        return;
      }
    }
    out = value;
  }

  void Error(std::string message) { errors_.push_back(std::move(message)); }

 private:
  std::vector<std::string>& errors_;
};

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string_view::npos ? text.size() : comma;
    const std::string_view item = Trim(text.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

void ParseOverride(std::string_view line, std::string_view where,
                   Parser& parser, RunConfig& config) {
  // feature.<name>: key=value ...
  std::string_view rest = line.substr(std::string_view("feature.").size());
  auto sep = rest.find(':');
  if (sep == std::string_view::npos) sep = rest.find('=');
  if (sep == std::string_view::npos) {
    parser.Error(std::string(where) + ": expected 'feature.<name>: key=value ...'");
    return;
  }
  FeatureOverride o;
  o.name = std::string(Trim(rest.substr(0, sep)));
  if (o.name.empty()) {
    parser.Error(std::string(where) + ": missing feature name");
    return;
  }
  std::istringstream items{std::string(rest.substr(sep + 1))};
  std::string item;
  const std::string label = std::string(where) + " (feature '" + o.name + "')";
  while (items >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      parser.Error(label + ": expected key=value, got '" + item + "'");
      continue;
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    int number = 0;
    if (key == "monotone" || key == "curvature" || key == "S" ||
        key == "D" || key == "smoothness" || key == "max_degree") {
      parser.Number(label + " " + key, value, number);
      if (key == "monotone") o.monotone = number;
      if (key == "curvature") o.curvature = number;
      if (key == "S" || key == "smoothness") o.smoothness = number;
      if (key == "D" || key == "max_degree") o.max_degree = number;
    } else if (key == "outputs") {
      std::string_view list = value;
      if (list.size() < 2 || list.front() != '[' || list.back() != ']') {
        parser.Error(label + ": outputs must look like [0,2]");
        continue;
      }
      std::vector<int> outputs;
      for (const auto& s : SplitList(list.substr(1, list.size() - 2))) {
        int v = 0;
        parser.Number(label + " outputs", s, v);
        outputs.push_back(v);
      }
      o.outputs = std::move(outputs);
    } else {
      parser.Error(label + ": unknown key '" + key + "'");
    }
  }
  config.constraints.push_back(std::move(o));
}

std::string Num(double v) { return FormatNumber(v); }

}  // namespace

RunConfig ParseRunConfig(std::string_view text,
                         const std::filesystem::path& base_dir) {
  RunConfig config;
  std::vector<std::string> errors;
  Parser parser(errors);
  std::string section;
  bool have_path = false;
  bool have_target = false;
  std::map<std::string, int> seen;

  std::istringstream lines{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const std::string line = StripComment(raw);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') {
        parser.Error(where + ": malformed section header");
        continue;
      }
      section = std::string(Trim(std::string_view(line).substr(1, line.size() - 2)));
      static const char* kSections[] = {"data",     "split",       "train",
                                        "binning",  "defaults",    "constraints",
                                        "output"};
      if (std::find(std::begin(kSections), std::end(kSections), section) ==
          std::end(kSections)) {
        parser.Error(where + ": unknown section [" + section + "]");
      }
      continue;
    }
    if (section == "constraints") {
      if (line.rfind("feature.", 0) == 0) {
        ParseOverride(line, where, parser, config);
      } else {
        parser.Error(where + ": constraint lines start with 'feature.<name>:'");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      parser.Error(where + ": expected key = value");
      continue;
    }
    const std::string key(Trim(std::string_view(line).substr(0, eq)));
    const std::string value(Trim(std::string_view(line).substr(eq + 1)));
    const std::string full = section + "." + key;
    const std::string label = where + " (" + full + ")";
    if (++seen[full] > 1) parser.Error(label + ": duplicate key");

    if (full == "data.path") {
      std::filesystem::path p(value);
      config.data_path = p.is_absolute() ? p : base_dir / p;
      have_path = !value.empty();
    } else if (full == "data.target") {
      config.target = value;
      have_target = !value.empty();
    } else if (full == "data.task") {
      try {
        config.task = ParseTask(value);
      } catch (const polygam::Error& e) {
        parser.Error(label + ": " + e.what());
      }
    } else if (full == "data.categorical") {
      config.categorical = SplitList(value);
    } else if (full == "split.train") {
      parser.Number(label, value, config.train_fraction);
    } else if (full == "split.valid") {
      parser.Number(label, value, config.valid_fraction);
    } else if (full == "split.test") {
      parser.Number(label, value, config.test_fraction);
    } else if (full == "split.seed") {
      parser.Number(label, value, config.seed);
      config.train.seed = config.seed;
    } else if (full == "train.learning_rate") {
      parser.Number(label, value, config.train.learning_rate);
    } else if (full == "train.l1") {
      parser.Number(label, value, config.train.l1);
    } else if (full == "train.l2") {
      parser.Number(label, value, config.train.l2);
    } else if (full == "train.min_data_in_leaf") {
      parser.Number(label, value, config.train.min_data_in_leaf);
    } else if (full == "train.max_iterations") {
      parser.Number(label, value, config.train.max_iterations);
    } else if (full == "train.early_stopping_patience") {
      parser.Number(label, value, config.train.early_stopping_patience);
    } else if (full == "train.num_threads") {
      parser.Number(label, value, config.train.num_threads);
    } else if (full == "train.snapshot_interval") {
      parser.Number(label, value, config.train.snapshot_interval);
    } else if (full == "binning.n_bins") {
      parser.Number(label, value, config.scheme.n_bins_degree0);
    } else if (full == "binning.n_bins_higher") {
      parser.Number(label, value, config.scheme.n_bins_higher);
    } else if (full == "defaults.S" || full == "defaults.smoothness") {
      parser.Number(label, value, config.defaults.smoothness);
    } else if (full == "defaults.D" || full == "defaults.max_degree") {
      parser.Number(label, value, config.defaults.max_degree);
    } else if (full == "defaults.monotone") {
      parser.Number(label, value, config.defaults.monotone);
    } else if (full == "defaults.curvature") {
      parser.Number(label, value, config.defaults.curvature);
    } else if (full == "output.dir") {
      std::filesystem::path p(value);
      config.output_dir = p.is_absolute() ? p : base_dir / p;
    } else {
      parser.Error(label + ": unknown key");
    }
  }

  if (!have_path) parser.Error("data.path is required");
  if (!have_target) parser.Error("data.target is required");
  const double fractions[] = {config.train_fraction, config.valid_fraction,
                              config.test_fraction};
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) {
      parser.Error("split fractions must lie in [0, 1]");
      break;
    }
  }
  if (std::abs(config.train_fraction + config.valid_fraction +
               config.test_fraction - 1.0) > 1e-9) {
    parser.Error("split fractions must sum to 1");
  }
  if (!(config.train_fraction > 0.0)) parser.Error("split.train must be > 0");
  config.scheme.min_data_in_leaf = config.train.min_data_in_leaf;
  try {
    config.train.Validate();
  } catch (const polygam::Error& e) {
    parser.Error(e.what());
  }
  try {
    config.scheme.Validate();
  } catch (const polygam::Error& e) {
    parser.Error(e.what());
  }
  if (config.train.early_stopping_patience > 0 &&
      !(config.valid_fraction > 0.0)) {
    parser.Error(
        "early_stopping_patience > 0 needs split.valid > 0 (or set it to 0)");
  }

  if (!errors.empty()) {
    std::string message = "invalid configuration:";
    for (const auto& e : errors) message += "\n  " + e;
    throw ConfigError(message);
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << file.rdbuf();
  return ParseRunConfig(text.str(), std::filesystem::absolute(path).parent_path());
}

std::string ResolvedConfigText(const RunConfig& c) {
  std::ostringstream s;
  s << "# resolved configuration, every default filled in\n";
  s << "[data]\n";
  s << "path = " << std::filesystem::absolute(c.data_path).string() << "\n";
  s << "target = " << c.target << "\n";
  s << "task = " << TaskName(c.task) << "\n";
  s << "categorical = ";
  for (std::size_t i = 0; i < c.categorical.size(); ++i) {
    s << (i ? ", " : "") << c.categorical[i];
  }
  s << "\n\n[split]\n";
  s << "train = " << Num(c.train_fraction) << "\n";
  s << "valid = " << Num(c.valid_fraction) << "\n";
  s << "test = " << Num(c.test_fraction) << "\n";
  s << "seed = " << c.seed << "\n\n";
  s << "[train]\n";
  s << "learning_rate = " << Num(c.train.learning_rate) << "\n";
  s << "l1 = " << Num(c.train.l1) << "\n";
  s << "l2 = " << Num(c.train.l2) << "\n";
  s << "min_data_in_leaf = " << c.train.min_data_in_leaf << "\n";
  s << "max_iterations = " << c.train.max_iterations << "\n";
  s << "early_stopping_patience = " << c.train.early_stopping_patience << "\n";
  s << "num_threads = " << c.train.num_threads << "\n";
  s << "snapshot_interval = " << c.train.snapshot_interval << "\n\n";
  s << "[binning]\n";
  s << "n_bins = " << c.scheme.n_bins_degree0 << "\n";
  s << "n_bins_higher = " << c.scheme.n_bins_higher << "\n\n";
  s << "[defaults]\n";
  s << "S = " << c.defaults.smoothness << "\n";
  s << "D = " << c.defaults.max_degree << "\n";
  s << "monotone = " << c.defaults.monotone << "\n";
  s << "curvature = " << c.defaults.curvature << "\n\n";
  s << "[constraints]\n";
  for (const auto& o : c.constraints) {
    s << "feature." << o.name << ":";
    if (o.monotone) s << " monotone=" << *o.monotone;
    if (o.curvature) s << " curvature=" << *o.curvature;
    if (o.smoothness) s << " S=" << *o.smoothness;
    if (o.max_degree) s << " D=" << *o.max_degree;
    if (o.outputs) {
      s << " outputs=[";
      for (std::size_t i = 0; i < o.outputs->size(); ++i) {
        s << (i ? "," : "") << (*o.outputs)[i];
      }
      s << "]";
    }
    s << "\n";
  }
  s << "\n[output]\n";
  s << "dir = " << std::filesystem::absolute(c.output_dir).string() << "\n";
  return s.str();
}

ConstraintSpec BuildConstraints(const RunConfig& config, const Dataset& data) {
  ConstraintSpec spec(data.feature_kinds, data.num_outputs(), config.defaults);
  std::vector<std::string> errors;
  for (const auto& o : config.constraints) {
    const int k = data.FeatureIndex(o.name);
    if (k < 0) {
      errors.push_back("constraint on unknown feature '" + o.name + "'");
      continue;
    }
    FeatureConstraint& fc = spec.feature(static_cast<std::size_t>(k));
    if (o.monotone) fc.monotone = *o.monotone;
    if (o.curvature) fc.curvature = *o.curvature;
    if (o.smoothness) fc.smoothness = *o.smoothness;
    if (o.max_degree) fc.max_degree = *o.max_degree;
    if (o.outputs) {
      bool ok = true;
      for (int i : *o.outputs) {
        if (i < 0 || i >= data.num_outputs()) {
          errors.push_back("feature '" + o.name + "': output " +
                           std::to_string(i) + " out of range [0, " +
                           std::to_string(data.num_outputs()) + ")");
          ok = false;
        }
      }
      if (ok) spec.RestrictTo(static_cast<std::size_t>(k), *o.outputs);
    }
  }
  try {
    spec.Validate(data.feature_kinds, data.feature_names);
  } catch (const polygam::Error& e) {
    errors.push_back(e.what());
  }
  if (!errors.empty()) {
    std::string message = "invalid constraints:";
    for (const auto& e : errors) message += "\n  " + e;
    throw ConfigError(message);
  }
  return spec;
}

Partition SplitRows(const Dataset& data, double train_fraction,
                    double valid_fraction, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  auto below = [&engine](std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine();
    while (v >= limit) v = engine();
    return static_cast<std::size_t>(v % n);
  };

  std::vector<std::vector<std::size_t>> groups;
  if (data.task == Task::kRegression) {
    groups.resize(1);
    for (std::size_t r = 0; r < data.num_rows(); ++r) groups[0].push_back(r);
  } else {
    groups.resize(static_cast<std::size_t>(std::max(data.num_classes, 2)));
    for (std::size_t r = 0; r < data.num_rows(); ++r) {
      groups[static_cast<std::size_t>(data.targets[r])].push_back(r);
    }
  }

  Partition part;
  for (auto& rows : groups) {
    for (std::size_t i = rows.size(); i > 1; --i) {
      std::swap(rows[i - 1], rows[below(i)]);
    }
    const double n = static_cast<double>(rows.size());
    const std::size_t n_train =
        std::min(rows.size(), static_cast<std::size_t>(std::floor(n * train_fraction + 0.5)));
    const std::size_t n_valid = std::min(
        rows.size() - n_train,
        static_cast<std::size_t>(std::floor(n * valid_fraction + 0.5)));
    part.train.insert(part.train.end(), rows.begin(), rows.begin() + n_train);
    part.valid.insert(part.valid.end(), rows.begin() + n_train,
                      rows.begin() + n_train + n_valid);
    part.test.insert(part.test.end(), rows.begin() + n_train + n_valid,
                     rows.end());
  }
  std::sort(part.train.begin(), part.train.end());
  std::sort(part.valid.begin(), part.valid.end());
  std::sort(part.test.begin(), part.test.end());
  return part;
}

}  // namespace polygam::cli
