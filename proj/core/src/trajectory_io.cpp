#include "hypgame/engine.hpp"
#include "hypgame/serialization.hpp"
#include "hypgame/text.hpp"

namespace hypgame {

using nlohmann::json;

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  out << json{{"type", "header"}, {"config", trajectory.config}, {"initial", trajectory.initial}}.dump()
      << '\n';
  for (const auto& rec : trajectory.rounds) {
    json line = rec;
    line["type"] = "round";
    out << line.dump() << '\n';
  }
  json last{{"type", "final"},
            {"final", trajectory.final},
            {"termination_reason", trajectory.termination_reason}};
  if (trajectory.final_diagnosis) last["final_diagnosis"] = *trajectory.final_diagnosis;
  out << last.dump() << '\n';
}

Trajectory read_trajectory(std::istream& in) {
  Trajectory t;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  bool final = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      const auto type = j.at("type").get<std::string>();
      if (type == "header") {
        t.config = j.at("config").get<GameConfig>();
        t.initial = j.at("initial").get<HypothesisState>();
        header = true;
      } else if (type == "round") {
        t.rounds.push_back(j.get<RoundRecord>());
      } else if (type == "final") {
        t.final = j.at("final").get<HypothesisState>();
        t.termination_reason = j.at("termination_reason").get<TerminationReason>();
        if (j.contains("final_diagnosis")) t.final_diagnosis = j.at("final_diagnosis").get<Diagnosis>();
        final = true;
      } else {
        throw Error(ErrorCode::invalid_input, "unknown line type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw InputError("trajectory line " + std::to_string(line_no) + ": " + e.what(), {line_no});
    }
  }
  if (!header || !final) throw InputError("trajectory lacks its header or final line");
  return t;
}

}  // namespace hypgame
