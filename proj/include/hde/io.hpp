// Copyright 2026 The HDE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HDE_IO_HPP_
#define HDE_IO_HPP_

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "hde/axioms.hpp"
#include "hde/dynamics.hpp"
#include "hde/experiment.hpp"
#include "hde/rx3c.hpp"
#include "hde/scenarios.hpp"

namespace hde {

using Json = nlohmann::ordered_json;

// Thrown for well-formed JSON that does not describe a valid object.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integers stay plain; other values become {"num":p,"den":q}.
Json rational_to_json(const Rational& value);
Rational rational_from_json(const Json& j);

Json matrix_to_json(const UtilityMatrix& m);
UtilityMatrix matrix_from_json(const Json& j, std::size_t n);

// {"n", "caf", "utilities"}; agents 1-based wherever they appear.
Json game_to_json(const Game& game);
Game game_from_json(const Json& j);

Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j, std::size_t n);

// {"type":"single","agent":a,"target":c|"new"} or {"type":"group","members":[...]}.
// Agents and coalition indices are 1-based.
Json deviation_to_json(const Deviation& d);
Deviation deviation_from_json(const Json& j);

// {"model":..., "coefficient":{"num":..,"den":..}}
Json model_to_json(const PerceptionModel& model);
PerceptionModel model_from_json(const Json& j);

Json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

// One JSON line per step, then a final outcome line.
void write_trace_jsonl(std::ostream& out, const Trace& trace);
Json outcome_to_json(const Trace& trace);

Json certificate_to_json(const CycleCertificate& c);
Json verdict_to_json(const AxiomVerdict& v);
Json stats_to_json(const OutcomeStats& s);
Json summary_to_json(const BatchSummary& s);

// Reads and parses a file; throws FormatError naming the file on failure.
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace hde

#endif  // HDE_IO_HPP_
