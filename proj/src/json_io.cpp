#include "vlkey/json_io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace vlkey {

namespace {

BigInt bigint_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw std::invalid_argument("expected integer or integer string");
}

Json bigint_to_json(const BigInt& n) {
  if (n <= std::numeric_limits<long long>::max() &&
      n >= std::numeric_limits<long long>::min())
    return Json(n.convert_to<long long>());
  return Json(n.str());
}

}  // namespace

Json rational_to_json(const Rational& q) {
  return Json::array({bigint_to_json(boost::multiprecision::numerator(q)),
                      bigint_to_json(boost::multiprecision::denominator(q))});
}

Rational rational_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument("rational: expected [num, den]");
  const BigInt num = bigint_from_json(j[0]);
  const BigInt den = bigint_from_json(j[1]);
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  return Rational(num, den);
}

NamedSource source_from_json(const Json& j, std::ostream* warnings) {
  if (!j.contains("alphabet_x") || !j.contains("alphabet_y") || !j.contains("mass"))
    throw std::invalid_argument("source: need alphabet_x, alphabet_y, mass");
  NamedSource out;
  out.alphabet_x = j.at("alphabet_x");
  out.alphabet_y = j.at("alphabet_y");
  const std::size_t nx = out.alphabet_x.size();
  const std::size_t ny = out.alphabet_y.size();
  out.source = JointSource(nx, ny);
  for (const auto& entry : j.at("mass")) {
    if (!entry.is_array() || entry.size() < 3)
      throw std::invalid_argument("source: mass entry must be [x, y, num, den]");
    const std::size_t x = entry[0].get<std::size_t>();
    const std::size_t y = entry[1].get<std::size_t>();
    if (x >= nx || y >= ny)
      throw std::invalid_argument("source: mass index out of range");
    Rational p;
    if (entry.size() == 4 && !entry[2].is_number_float()) {
      p = Rational(bigint_from_json(entry[2]), bigint_from_json(entry[3]));
    } else if (entry.size() == 3 && entry[2].is_number_float()) {
      if (warnings)
        *warnings << "warning: double mass " << entry[2].get<double>() << " at ("
                  << x << "," << y << ") converted to a rational\n";
      p = rational_from_double(entry[2].get<double>());
    } else {
      throw std::invalid_argument("source: mass entry must be [x, y, num, den]");
    }
    out.source.at(x, y) += p;
  }
  out.source.validate();
  return out;
}

Json source_to_json(const NamedSource& s) {
  Json j;
  j["alphabet_x"] = s.alphabet_x;
  j["alphabet_y"] = s.alphabet_y;
  Json mass = Json::array();
  for (std::size_t x = 0; x < s.source.nx(); ++x)
    for (std::size_t y = 0; y < s.source.ny(); ++y) {
      const Rational& p = s.source.at(x, y);
      if (p == 0) continue;
      mass.push_back(Json::array(
          {x, y, bigint_to_json(boost::multiprecision::numerator(p)),
           bigint_to_json(boost::multiprecision::denominator(p))}));
    }
  j["mass"] = std::move(mass);
  return j;
}

NamedSource load_source(const std::string& path, std::ostream* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open source file: " + path);
  Json j;
  in >> j;
  return source_from_json(j, warnings);
}

Json message_to_json(const Message& m) {
  if (m.failure) return Json("F");
  return Json(m.payload);
}

Message message_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "F") return Message::fail();
    throw std::invalid_argument("message: unknown string payload");
  }
  Message m;
  m.payload = j.get<std::vector<long long>>();
  return m;
}

Json transcript_to_json(const Transcript& t) {
  Json arr = Json::array();
  for (const auto& m : t) arr.push_back(message_to_json(m));
  return arr;
}

Transcript transcript_from_json(const Json& j) {
  Transcript t;
  for (const auto& m : j) t.push_back(message_from_json(m));
  return t;
}

Json outcome_to_json(const KeyOutcome& o, bool with_mass) {
  Json j;
  j["transcript"] = transcript_to_json(o.w);
  j["L"] = o.L;
  j["A"] = o.a;
  j["B"] = o.b;
  j["p"] = with_mass ? rational_to_json(o.p) : Json(nullptr);
  return j;
}

KeyOutcome outcome_from_json(const Json& j) {
  KeyOutcome o;
  o.w = transcript_from_json(j.at("transcript"));
  o.L = j.at("L").get<long long>();
  o.a = j.at("A").get<long long>();
  o.b = j.at("B").get<long long>();
  if (j.contains("p") && !j.at("p").is_null()) o.p = rational_from_json(j.at("p"));
  return o;
}

std::string law_to_jsonl(const KeyLaw& law) {
  std::ostringstream out;
  for (const auto& o : law.outcomes) out << outcome_to_json(o, true).dump() << "\n";
  return out.str();
}

KeyLaw law_from_jsonl(std::istream& in) {
  KeyLaw law;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    law.outcomes.push_back(outcome_from_json(Json::parse(line)));
  }
  law.normalize();
  return law;
}

KeyLaw load_law(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open law file: " + path);
  return law_from_jsonl(in);
}

void save_law(const std::string& path, const KeyLaw& law) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write law file: " + path);
  out << law_to_jsonl(law);
}

Json ideal_distance_to_json(const IdealDistance& d) {
  Json j;
  j["sup_distance"] = to_double(d.sup);
  j["sup_distance_exact"] = rational_to_json(d.sup);
  Json per_l = Json::array();
  for (const auto& [l, v] : d.per_l) {
    Json row;
    row["l"] = l;
    row["distance"] = to_double(v);
    row["distance_exact"] = rational_to_json(v);
    row["p_l"] = to_double(d.p_l.at(l));
    per_l.push_back(std::move(row));
  }
  j["per_l"] = std::move(per_l);
  return j;
}

}  // namespace vlkey
