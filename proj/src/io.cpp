#include "cyclevol/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <unistd.h>

namespace cyclevol::io {

namespace {

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(std::string("missing field '") + key + "'");
  return *it;
}

template <class T, class F>
std::optional<T> optional_field(const json& j, const char* key, F convert) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return convert(*it);
}

json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

void put_pair(json& out, const Rational& q) {
  out["numerator"] = integer_json(q.get_num());
  out["denominator"] = integer_json(q.get_den());
}

json pair_json(const Rational& q) {
  json out = json::object();
  put_pair(out, q);
  return out;
}

json hypotheses_to_json(const std::vector<mobility::Hypothesis>& hs) {
  json out = json::array();
  for (const auto& h : hs) out.push_back({{"name", h.name}, {"holds", h.holds}});
  return out;
}

}  // namespace

json to_json(const Rational& q) { return cyclevol::to_string(q); }

json to_json(const Integer& z) { return z.get_str(); }

Rational rational_from_json(const json& j) {
  if (j.is_object()) {
    const Integer den = integer_from_json(field(j, "denominator"));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return ratio(integer_from_json(field(j, "numerator")), den);
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number_float()) throw std::invalid_argument("floating-point numbers are not exact; write \"p/q\"");
  throw std::invalid_argument("expected a rational, got " + j.dump());
}

Integer integer_from_json(const json& j) {
  if (j.is_object()) throw std::invalid_argument("expected an integer, got " + j.dump());
  const Rational q = rational_from_json(j);
  if (!is_integer(q)) throw std::invalid_argument("expected an integer, got " + cyclevol::to_string(q));
  return q.get_num();
}

json to_json(const VarietySpec& x) { return x.dims(); }

VarietySpec variety_from_json(const json& j) {
  if (j.is_object()) return variety_from_json(field(j, "dims"));
  if (!j.is_array()) throw std::invalid_argument("variety must be an array of projective space dimensions");
  return VarietySpec(j.get<std::vector<int>>());
}

json to_json(const DivisorClass& d) {
  json out = json::array();
  for (const auto& q : d.coords()) out.push_back(pair_json(q));
  return out;
}

DivisorClass divisor_from_json(const VarietySpec& x, const json& j) {
  if (!j.is_array()) throw std::invalid_argument("divisor must be an array of coordinates");
  std::vector<Rational> coords;
  for (const auto& v : j) coords.push_back(rational_from_json(v));
  return DivisorClass(x, std::move(coords));
}

json to_json(const CycleClass& a) {
  json terms = json::array();
  for (const auto& [m, q] : a.terms()) {
    json term = {{"exponents", m.exponents}};
    put_pair(term, q);
    terms.push_back(std::move(term));
  }
  return {{"codim", a.codim()}, {"terms", terms}};
}

CycleClass class_from_json(const VarietySpec& x, const json& j) {
  if (!j.is_object()) throw std::invalid_argument("class must be a JSON object");
  const int codim = field(j, "codim").get<int>();
  if (j.contains("power_of")) return ring::divisor_power(divisor_from_json(x, j["power_of"]), codim);
  if (j.contains("dense")) {
    const auto monomials = ring::basis(x, codim);
    const json& dense = j["dense"];
    if (!dense.is_array() || dense.size() != monomials.size())
      throw std::invalid_argument("dense class needs " + std::to_string(monomials.size()) + " coefficients");
    CycleClass::Terms terms;
    for (std::size_t i = 0; i < monomials.size(); ++i) terms[monomials[i]] = rational_from_json(dense[i]);
    return CycleClass(x, codim, std::move(terms));
  }
  CycleClass::Terms terms;
  for (const auto& t : field(j, "terms")) {
    ring::Monomial m{field(t, "exponents").get<std::vector<int>>()};
    terms[m] += t.contains("coeff") ? rational_from_json(t["coeff"]) : rational_from_json(t);
  }
  return CycleClass(x, codim, std::move(terms));
}

json to_json(const PowerProduct& v, int digits) {
  json radicals = json::array();
  for (const auto& [base, e] : v.radicals()) radicals.push_back({base.get_str(), to_json(e)});
  return {{"exact", v.to_string()},
          {"coefficient", to_json(v.coefficient())},
          {"radicals", radicals},
          {"lower", v.decimal(digits, Rounding::down)},
          {"upper", v.decimal(digits, Rounding::up)}};
}

PowerProduct power_product_from_json(const json& j) {
  PowerProduct out(rational_from_json(field(j, "coefficient")));
  for (const auto& r : field(j, "radicals"))
    out *= PowerProduct::power(Rational(Integer(r.at(0).get<std::string>())), rational_from_json(r.at(1)));
  return out;
}

json to_json(const mobility::BoundReport& r) {
  json out = {{"formula_id", mobility::to_string(r.formula)},
              {"statement", r.statement},
              {"n", r.n},
              {"k", r.k},
              {"s", r.s ? to_json(*r.s) : json(nullptr)},
              {"t", r.t ? to_json(*r.t) : json(nullptr)},
              {"hypotheses", hypotheses_to_json(r.hypotheses)},
              {"applicable", r.applicable()},
              {"value", r.value ? to_json(*r.value) : json(nullptr)}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

mobility::BoundReport bound_report_from_json(const json& j) {
  mobility::BoundReport r;
  r.formula = mobility::formula_from_string(field(j, "formula_id").get<std::string>());
  r.statement = field(j, "statement").get<std::string>();
  r.n = field(j, "n").get<int>();
  r.k = field(j, "k").get<int>();
  r.s = optional_field<Integer>(j, "s", integer_from_json);
  r.t = optional_field<Integer>(j, "t", integer_from_json);
  for (const auto& h : field(j, "hypotheses")) r.hypotheses.push_back({h.at("name"), h.at("holds")});
  r.value = optional_field<PowerProduct>(j, "value", power_product_from_json);
  r.note = j.value("note", "");
  return r;
}

json to_json(const volhat::OptimizationResult& r) {
  json out = {{"status", volhat::to_string(r.status)},
              {"value", r.value},
              {"exact", r.exact ? to_json(*r.exact) : json(nullptr)},
              {"argopt", r.argopt ? to_json(*r.argopt) : json(nullptr)},
              {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
              {"grid_value", r.grid_value ? json(*r.grid_value) : json(nullptr)},
              {"tolerance", to_json(r.tolerance)},
              {"iterations", r.iterations}};
  if (!r.note.empty()) out["note"] = r.note;
  return out;
}

volhat::OptimizationResult optimization_from_json(const VarietySpec& x, const json& j) {
  volhat::OptimizationResult r;
  r.status = volhat::status_from_string(field(j, "status").get<std::string>());
  r.value = field(j, "value").get<double>();
  r.exact = optional_field<PowerProduct>(j, "exact", power_product_from_json);
  r.argopt = optional_field<DivisorClass>(j, "argopt", [&](const json& v) { return divisor_from_json(x, v); });
  r.witness = optional_field<PowerProduct>(j, "witness", power_product_from_json);
  r.grid_value = optional_field<double>(j, "grid_value", [](const json& v) { return v.get<double>(); });
  r.tolerance = rational_from_json(field(j, "tolerance"));
  r.iterations = field(j, "iterations").get<int>();
  r.note = j.value("note", "");
  return r;
}

json to_json(const seshadri::SeshadriEstimate& e) {
  return {{"b", to_json(e.b)},
          {"t", to_json(e.t)},
          {"lo", to_json(e.lo)},
          {"hi", to_json(e.hi)},
          {"collapsed", e.collapsed},
          {"validity", "general points"}};
}

seshadri::SeshadriEstimate seshadri_from_json(const json& j) {
  seshadri::SeshadriEstimate e;
  e.b = integer_from_json(field(j, "b"));
  e.t = integer_from_json(field(j, "t"));
  e.lo = rational_from_json(field(j, "lo"));
  e.hi = power_product_from_json(field(j, "hi"));
  e.collapsed = field(j, "collapsed").get<bool>();
  return e;
}

json to_json(const seshadri::WmcUpper& w) {
  return {{"volume_branch", to_json(w.volume_branch)},
          {"growth_branch", to_json(w.growth_branch)},
          {"value", to_json(w.value)}};
}

json to_json(const seshadri::WmobCiBounds& b) {
  return {{"t", to_json(b.t)},
          {"points", to_json(b.points)},
          {"class_scale", to_json(b.class_scale)},
          {"ratio", to_json(b.ratio)},
          {"lower", to_json(b.lower)},
          {"upper", to_json(b.upper)},
          {"envelope", to_json(b.envelope)},
          {"relative_gap_upper", b.relative_gap(Rounding::up, 64).get_d()}};
}

seshadri::WmobCiBounds wmob_from_json(const json& j) {
  seshadri::WmobCiBounds b;
  b.t = integer_from_json(field(j, "t"));
  b.points = integer_from_json(field(j, "points"));
  b.class_scale = integer_from_json(field(j, "class_scale"));
  b.ratio = power_product_from_json(field(j, "ratio"));
  b.lower = power_product_from_json(field(j, "lower"));
  b.upper = rational_from_json(field(j, "upper"));
  b.envelope = power_product_from_json(field(j, "envelope"));
  return b;
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string job_hash(const json& j) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cyclevol::io
