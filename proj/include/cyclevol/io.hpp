#pragma once

#include "cyclevol/cycle_ring.hpp"
#include "cyclevol/mobility_bounds.hpp"
#include "cyclevol/power_product.hpp"
#include "cyclevol/seshadri_wmob.hpp"
#include "cyclevol/volhat.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

/// JSON encoding of classes and reports. Class and divisor coefficients are
/// {"numerator", "denominator"} pairs; report scalars are "p/q" strings; a
/// PowerProduct carries its exact factorization next to outward-rounded
/// decimals. Readers accept any of the three rational spellings.
namespace cyclevol::io {

using nlohmann::json;
using ring::CycleClass;
using ring::DivisorClass;
using ring::VarietySpec;

json to_json(const Rational& q);
json to_json(const Integer& z);
Rational rational_from_json(const json& j);
Integer integer_from_json(const json& j);

json to_json(const VarietySpec& x);
VarietySpec variety_from_json(const json& j);

json to_json(const DivisorClass& d);
DivisorClass divisor_from_json(const VarietySpec& x, const json& j);

/// {"codim": c, "terms": [{"exponents": [...], "numerator": p, "denominator": q}, ...]}
json to_json(const CycleClass& a);
/// Accepts the terms form, {"codim": c, "dense": [...]} in basis order, or
/// {"power_of": [divisor coords], "codim": c} for [A^c].
CycleClass class_from_json(const VarietySpec& x, const json& j);

json to_json(const PowerProduct& v, int digits = 12);
PowerProduct power_product_from_json(const json& j);

json to_json(const mobility::BoundReport& r);
mobility::BoundReport bound_report_from_json(const json& j);

json to_json(const volhat::OptimizationResult& r);
volhat::OptimizationResult optimization_from_json(const VarietySpec& x, const json& j);

json to_json(const seshadri::SeshadriEstimate& e);
seshadri::SeshadriEstimate seshadri_from_json(const json& j);

json to_json(const seshadri::WmcUpper& w);

json to_json(const seshadri::WmobCiBounds& b);
seshadri::WmobCiBounds wmob_from_json(const json& j);

/// Writes `text` to a sibling temporary file and renames it over `path`.
void write_atomically(const std::filesystem::path& path, const std::string& text);

/// 64-bit FNV-1a of the compact dump of `j`, as 16 hex digits.
std::string job_hash(const json& j);

}  // namespace cyclevol::io
