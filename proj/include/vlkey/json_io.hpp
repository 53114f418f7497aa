#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "vlkey/dist.hpp"
#include "vlkey/distance.hpp"
#include "vlkey/transcript.hpp"

namespace vlkey {

using Json = nlohmann::ordered_json;

// {"alphabet_x": [...], "alphabet_y": [...],
//  "mass": [[x_index, y_index, numerator, denominator], ...]}
// Probabilities as integer rationals; a third-element double is accepted
// with a warning on `warnings`.
struct NamedSource {
  JointSource source;
  Json alphabet_x, alphabet_y;
};

NamedSource source_from_json(const Json& j, std::ostream* warnings = nullptr);
Json source_to_json(const NamedSource& s);
NamedSource load_source(const std::string& path, std::ostream* warnings = nullptr);

Json message_to_json(const Message& m);
Message message_from_json(const Json& j);
Json transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const Json& j);

// JSONL outcome log: one {"transcript": [...], "L":, "A":, "B":, "p":} per line.
Json outcome_to_json(const KeyOutcome& o, bool with_mass);
KeyOutcome outcome_from_json(const Json& j);
std::string law_to_jsonl(const KeyLaw& law);
KeyLaw law_from_jsonl(std::istream& in);
KeyLaw load_law(const std::string& path);
void save_law(const std::string& path, const KeyLaw& law);

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j);

Json ideal_distance_to_json(const IdealDistance& d);

}  // namespace vlkey
