// Copyright 2026 The PNC Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pnc/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace pnc {
namespace {

using json = nlohmann::json;

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  Scenario parse() {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      throw ScenarioError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("line 1: scenario must be a JSON object");

    const int n = integer(doc, "n");
    const int m = integer(doc, "m");
    const int p = integer(doc, "p");
    if (n < 1 || m < 1 || p < 1) fail("n", "n, m and p must be positive");

    Scenario sc;
    NetworkSpec& spec = sc.spec;
    spec.link_matrix = int_matrix(doc, "link_matrix", n, m);
    const json& cons = field(doc, "constituency");
    if (!cons.is_array()) fail("constituency", "must be an array of rows");
    spec.constituency = int_matrix(doc, "constituency", static_cast<int>(cons.size()), m);
    spec.transition = real_matrix(doc, "transition", p, p);
    const Matrix weights = real_matrix(doc, "success_weights", p, m);
    for (int i = 0; i < p; ++i) spec.success_weights.push_back(weights.row(i).transpose());

    const json& arr = field(doc, "arrivals");
    if (!arr.is_array() || static_cast<int>(arr.size()) != n)
      fail("arrivals", "must be an array of " + std::to_string(n) + " arrival processes");
    for (const auto& item : arr) spec.arrivals.push_back(arrival(item));

    sc.initial.q = IntVector::Zero(n);
    if (doc.contains("initial_queue")) {
      const IntMatrix q = int_matrix(doc, "initial_queue", 1, n, /*as_row=*/true);
      sc.initial.q = q.row(0).transpose();
      if ((sc.initial.q.array() < 0).any()) fail("initial_queue", "entries must be nonnegative");
    }
    sc.initial.sigma = 0;
    if (doc.contains("initial_sigma")) {
      const int s = integer(doc, "initial_sigma");
      if (s < 1 || s > p) fail("initial_sigma", "must lie in 1.." + std::to_string(p));
      sc.initial.sigma = s - 1;
    }

    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      const std::string msg = e.what();
      const auto key = msg.substr(0, msg.find_first_of(" [."));
      fail(key, msg);
    }
    return sc;
  }

 private:
  int line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string::npos) return 1;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ScenarioError("line " + std::to_string(line_of(key)) + ": '" + key + "': " + what);
  }

  const json& field(const json& obj, const std::string& key) const {
    if (!obj.contains(key)) throw ScenarioError("missing required key '" + key + "'");
    return obj.at(key);
  }

  int integer(const json& obj, const std::string& key) const {
    const json& v = field(obj, key);
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<int>();
  }

  // Reads rows x cols; `as_row` accepts a flat list for a single row.
  IntMatrix int_matrix(const json& obj, const std::string& key, int rows, int cols,
                       bool as_row = false) const {
    const json& v = field(obj, key);
    IntMatrix out(rows, cols);
    if (as_row) {
      if (!v.is_array() || static_cast<int>(v.size()) != cols)
        fail(key, "must be a list of " + std::to_string(cols) + " integers");
      for (int j = 0; j < cols; ++j) {
        if (!v[j].is_number_integer()) fail(key, "entries must be integers");
        out(0, j) = v[j].get<int>();
      }
      return out;
    }
    if (!v.is_array() || static_cast<int>(v.size()) != rows)
      fail(key, "must have " + std::to_string(rows) + " rows");
    for (int i = 0; i < rows; ++i) {
      if (!v[i].is_array() || static_cast<int>(v[i].size()) != cols)
        fail(key, "row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
      for (int j = 0; j < cols; ++j) {
        if (!v[i][j].is_number_integer()) fail(key, "entries must be integers");
        out(i, j) = v[i][j].get<int>();
      }
    }
    return out;
  }

  Matrix real_matrix(const json& obj, const std::string& key, int rows, int cols) const {
    const json& v = field(obj, key);
    if (!v.is_array() || static_cast<int>(v.size()) != rows)
      fail(key, "must have " + std::to_string(rows) + " rows");
    Matrix out(rows, cols);
    for (int i = 0; i < rows; ++i) {
      if (!v[i].is_array() || static_cast<int>(v[i].size()) != cols)
        fail(key, "row " + std::to_string(i + 1) + " must have " + std::to_string(cols) + " entries");
      for (int j = 0; j < cols; ++j) {
        if (!v[i][j].is_number()) fail(key, "entries must be numbers");
        out(i, j) = v[i][j].get<double>();
      }
    }
    return out;
  }

  ArrivalProcess arrival(const json& item) const {
    if (!item.is_object()) fail("arrivals", "each entry must be an object");
    ArrivalProcess a;
    if (!item.contains("probability") || !item["probability"].is_number())
      fail("arrivals", "each entry needs a numeric 'probability'");
    a.probability = item["probability"].get<double>();
    if (item.contains("weight")) {
      if (!item["weight"].is_number_integer()) fail("arrivals", "'weight' must be an integer");
      a.weight = item["weight"].get<int>();
    }
    if (item.contains("phase_offset")) {
      if (!item["phase_offset"].is_number_integer()) fail("arrivals", "'phase_offset' must be an integer");
      a.phase_offset = item["phase_offset"].get<std::int64_t>();
    }
    if (item.contains("schedule")) {
      const json& sched = item["schedule"];
      if (!sched.is_array()) fail("schedule", "must be a list of [duration, probability] pairs");
      for (const auto& phase : sched) {
        SchedulePhase ph;
        if (phase.is_array() && phase.size() == 2 && phase[0].is_number_integer() && phase[1].is_number()) {
          ph.duration = phase[0].get<std::int64_t>();
          ph.probability = phase[1].get<double>();
        } else if (phase.is_object() && phase.contains("duration") && phase.contains("probability")) {
          ph.duration = phase["duration"].get<std::int64_t>();
          ph.probability = phase["probability"].get<double>();
        } else {
          fail("schedule", "entries must be [duration, probability] pairs");
        }
        a.schedule.push_back(ph);
      }
    }
    return a;
  }

  const std::string& text_;
};

NetworkSpec base_spec(IntMatrix links, IntMatrix constituency, Matrix transition,
                      std::vector<Vector> weights, std::vector<ArrivalProcess> arrivals) {
  NetworkSpec spec;
  spec.link_matrix = std::move(links);
  spec.constituency = std::move(constituency);
  spec.transition = std::move(transition);
  spec.success_weights = std::move(weights);
  spec.arrivals = std::move(arrivals);
  spec.validate();
  return spec;
}

Scenario with_empty_start(NetworkSpec spec) {
  Scenario sc;
  sc.initial.q = IntVector::Zero(spec.buffers());
  sc.spec = std::move(spec);
  return sc;
}

ArrivalProcess bernoulli(double probability, int weight) {
  ArrivalProcess a;
  a.probability = probability;
  a.weight = weight;
  return a;
}

}  // namespace

Scenario generic_scenario() {
  IntMatrix links(2, 3);
  links << -2, -1, -5,
            0,  1, -1;
  return with_empty_start(base_spec(links, IntMatrix::Ones(1, 3), Matrix::Ones(1, 1),
                                    {Vector::Ones(3)}, {bernoulli(0.8, 3), bernoulli(0.0, 1)}));
}

Scenario generic_modified_scenario() {
  Scenario sc = generic_scenario();
  sc.spec.link_matrix(1, 2) = -2;
  return sc;
}

Scenario natural_scenario() {
  IntMatrix links(3, 2);
  links << -3,  0,
            3, -1,
            0, -1;
  Matrix transition(2, 2);
  transition << 0.1, 0.2,
                0.9, 0.8;
  Vector good(2), bad(2);
  good << 1.0, 1.0;
  bad << 0.0, 1.0;
  return with_empty_start(base_spec(links, IntMatrix::Ones(1, 2), transition, {good, bad},
                                    {bernoulli(0.5, 1), bernoulli(0.0, 1), bernoulli(0.9, 1)}));
}

Scenario natural_alternating_scenario(std::int64_t phase_offset) {
  Scenario sc = natural_scenario();
  auto& a1 = sc.spec.arrivals[0];
  a1.schedule = {{100, 0.375 + 0.3}, {100, 0.375 - 0.3}};
  a1.probability = a1.mean_rate();
  a1.phase_offset = phase_offset;
  auto& a3 = sc.spec.arrivals[2];
  a3.schedule = {{250, 0.38 + 0.38}, {250, 0.0}};
  a3.probability = a3.mean_rate();
  a3.phase_offset = phase_offset;
  return sc;
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "generic") return generic_scenario();
  if (name == "generic-modified") return generic_modified_scenario();
  if (name == "natural") return natural_scenario();
  if (name == "natural-alternating") return natural_alternating_scenario();
  throw ScenarioError("unknown builtin scenario '" + name +
                      "' (expected generic, generic-modified, natural or natural-alternating)");
}

Scenario load_scenario(const std::string& source) {
  constexpr std::string_view kPrefix = "builtin:";
  if (source.rfind(kPrefix, 0) == 0) return builtin_scenario(source.substr(kPrefix.size()));
  std::ifstream in(source);
  if (!in) throw ScenarioError("cannot open scenario file '" + source + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ScenarioError& e) {
    throw ScenarioError(source + ": " + e.what());
  }
}

Scenario parse_scenario(const std::string& text) { return Parser(text).parse(); }

std::string dump_scenario(const Scenario& scenario) {
  const NetworkSpec& spec = scenario.spec;
  json doc;
  doc["n"] = spec.buffers();
  doc["m"] = spec.links();
  doc["p"] = spec.states();
  auto rows = [](const auto& mat) {
    json out = json::array();
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
      out.push_back(row);
    }
    return out;
  };
  doc["link_matrix"] = rows(spec.link_matrix);
  doc["constituency"] = rows(spec.constituency);
  doc["transition"] = rows(spec.transition);
  json weights = json::array();
  for (const auto& w : spec.success_weights) weights.push_back(std::vector<double>(w.data(), w.data() + w.size()));
  doc["success_weights"] = weights;
  json arrivals = json::array();
  for (const auto& a : spec.arrivals) {
    json item = {{"probability", a.probability}, {"weight", a.weight}};
    if (!a.schedule.empty()) {
      json sched = json::array();
      for (const auto& ph : a.schedule) sched.push_back({ph.duration, ph.probability});
      item["schedule"] = sched;
      item["phase_offset"] = a.phase_offset;
    }
    arrivals.push_back(item);
  }
  doc["arrivals"] = arrivals;
  doc["initial_queue"] = std::vector<int>(scenario.initial.q.data(), scenario.initial.q.data() + scenario.initial.q.size());
  doc["initial_sigma"] = scenario.initial.sigma + 1;
  return doc.dump(2) + "\n";
}

}  // namespace pnc
