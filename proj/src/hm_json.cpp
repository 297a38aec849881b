#include <json.hpp>

#include "tw/painleve2.hpp"

namespace tw::painleve2 {
namespace {

using nlohmann::json;

json hex_array(const std::vector<Real>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.to_hex());
  return a;
}

std::vector<Real> parse_array(const json& a, long bits) {
  std::vector<Real> out;
  out.reserve(a.size());
  for (const auto& s : a) out.push_back(Real::parse(s.get<std::string>(), bits));
  return out;
}

}  // namespace

std::string to_json(const HMSolution& sol) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "hastings_mcleod_solution";
  doc["precision_bits"] = sol.precision_bits();
  doc["element_degree"] = sol.element_degree();
  doc["newton_iterations"] = sol.newton_iterations();
  doc["residual_norm"] = sol.residual_norm();
  doc["x_left"] = sol.x_left().to_hex();
  doc["x_right"] = sol.x_right().to_hex();
  doc["grid"] = hex_array(sol.grid());
  doc["q"] = hex_array(sol.q_values());
  doc["q_prime"] = hex_array(sol.q_prime_values());
  doc["r"] = hex_array(sol.r_values());
  return doc.dump(1);
}

HMSolution from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("hm solution: malformed JSON: ") + e.what());
  }
  try {
    if (doc.at("schema_version").get<int>() != kSchemaVersion) {
      throw DomainError("hm solution: unsupported schema_version");
    }
    if (doc.at("kind").get<std::string>() != "hastings_mcleod_solution") {
      throw DomainError("hm solution: wrong document kind");
    }
    const long bits = doc.at("precision_bits").get<long>();
    HMSolution sol = HMSolution::from_nodes(parse_array(doc.at("grid"), bits), parse_array(doc.at("q"), bits),
                                            doc.at("element_degree").get<int>(), bits,
                                            doc.at("newton_iterations").get<int>());
    // derived columns are recomputed; a mismatch means the file was altered
    // or written by an incompatible build
    const auto qp = parse_array(doc.at("q_prime"), bits);
    const auto r = parse_array(doc.at("r"), bits);
    if (qp.size() != sol.q_prime_values().size() || r.size() != sol.r_values().size()) {
      throw ConsistencyError("hm solution: column lengths differ");
    }
    for (std::size_t i = 0; i < qp.size(); ++i) {
      if (!(qp[i] == sol.q_prime_values()[i]) || !(r[i] == sol.r_values()[i])) {
        throw ConsistencyError("hm solution: stored derivative data does not reproduce");
      }
    }
    return sol;
  } catch (const json::exception& e) {
    throw DomainError(std::string("hm solution: bad document: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DomainError(std::string("hm solution: bad number: ") + e.what());
  }
}

}  // namespace tw::painleve2
