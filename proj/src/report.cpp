#include <sstream>

#include "json.hpp"
#include "semiprov/lab.hpp"

namespace semiprov::lab {

std::string to_record(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["subject"] = r.subject;
  j["instance"] = r.instance;
  j["semantics"] = r.semantics;
  j["strategy"] = r.strategy;
  j["verdict"] = algebra::to_string(r.verdict);
  j["trials"] = r.trials;
  if (r.witness) {
    nlohmann::ordered_json w;
    nlohmann::ordered_json bindings = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.witness->bindings) bindings[k] = v;
    w["bindings"] = std::move(bindings);
    w["lhs"] = r.witness->lhs;
    w["rhs"] = r.witness->rhs;
    j["witness"] = std::move(w);
  } else {
    j["witness"] = nullptr;
  }
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j.dump();
}

std::string to_text(const CheckReport& r) {
  std::ostringstream os;
  os << r.subject << " " << r.instance;
  if (r.semantics != "none") os << " [" << r.semantics << "]";
  os << " " << r.strategy << ": " << algebra::to_string(r.verdict);
  if (r.verdict == Verdict::HoldsSampled && r.trials > 0) os << " (" << r.trials << " trials)";
  if (r.witness) {
    os << " at";
    for (const auto& [k, v] : r.witness->bindings) os << " " << k << "=" << v;
    os << " (lhs " << r.witness->lhs << ", rhs " << r.witness->rhs << ")";
  }
  if (!r.reason.empty()) os << " -- " << r.reason;
  return os.str();
}

}  // namespace semiprov::lab
