#include "cyclevol/acceptance.hpp"
#include "cyclevol/bound_constants.hpp"
#include "cyclevol/io.hpp"
#include "cyclevol/mobility_bounds.hpp"
#include "cyclevol/seshadri_wmob.hpp"
#include "cyclevol/volhat.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace {

using namespace cyclevol;
using io::json;
using ring::CycleClass;
using ring::DivisorClass;
using ring::VarietySpec;

enum Exit : int { ok = 0, internal = 1, parse = 2, inapplicable = 3, infeasible = 4, tolerance = 5 };

struct Outcome {
  json doc;
  int code = ok;
};

struct Settings {
  std::string command;
  std::string tol = "1/1000000";
  int grid = 16;
  int jobs = 1;
  std::optional<std::string> sweep;
  std::string formulation = "sup";
  std::vector<int> only;
};

struct Range {
  long lo;
  long hi;
};

Range parse_range(const std::string& text, long default_lo, long default_hi) {
  if (text.empty()) return {default_lo, default_hi};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("--sweep expects lo:hi, got '" + text + "'");
  Range r{std::stol(text.substr(0, colon)), std::stol(text.substr(colon + 1))};
  if (r.lo > r.hi) throw std::invalid_argument("--sweep range is empty");
  if (r.hi - r.lo > 1000000) throw std::invalid_argument("--sweep range is too long");
  return r;
}

// Runs fn(0..count-1) on at most `jobs` threads; results keep their index order.
std::vector<Outcome> parallel_map(std::size_t count, int jobs, const std::function<Outcome(std::size_t)>& fn) {
  std::vector<Outcome> out(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::clamp(jobs, 1, 256));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return out;
}

Outcome collect(std::vector<Outcome> parts, bool any_success_suffices) {
  Outcome out{json::array(), ok};
  int worst = ok;
  bool some_ok = false;
  for (auto& p : parts) {
    out.doc.push_back(std::move(p.doc));
    worst = std::max(worst, p.code);
    some_ok = some_ok || p.code == ok;
  }
  out.code = any_success_suffices && some_ok ? ok : worst;
  return out;
}

const json& need(const json& job, const char* key) {
  if (!job.contains(key) || job[key].is_null()) throw std::invalid_argument(std::string("job needs '") + key + "'");
  return job[key];
}

VarietySpec job_variety(const json& job) { return io::variety_from_json(need(job, "variety")); }

DivisorClass job_divisor(const json& job, const VarietySpec& x, const char* key = "A") {
  if (job.contains(key)) return io::divisor_from_json(x, job[key]);
  return ring::hyperplane_sum(x);
}

std::optional<Integer> job_integer(const json& job, const char* key) {
  if (!job.contains(key) || job[key].is_null()) return std::nullopt;
  return io::integer_from_json(job[key]);
}

// ---- constants -------------------------------------------------------------

json constants_entry(int n, int k) {
  const Rational e = constants::epsilon(n, k);
  const Rational t = constants::tau(n, k);
  return {{"n", n},
          {"k", k},
          {"epsilon", io::to_json(e)},
          {"tau", io::to_json(t)},
          {"epsilon_decimal", PowerProduct(e).decimal(12, Rounding::nearest)},
          {"tau_decimal", PowerProduct(t).decimal(12, Rounding::nearest)}};
}

Outcome run_constants(const json& job) {
  if (job.contains("table")) {
    const int top = job["table"].get<int>();
    if (top < 1 || top > 200) throw std::invalid_argument("--table must lie in [1, 200]");
    json rows = json::array();
    for (int n = 1; n <= top; ++n)
      for (int k = 0; k < n; ++k)
        rows.push_back(constants::defined(n, k)
                           ? constants_entry(n, k)
                           : json{{"n", n}, {"k", k}, {"epsilon", nullptr}, {"tau", nullptr},
                                  {"note", "recursion denominator vanishes"}});
    return {rows, ok};
  }
  return {constants_entry(need(job, "n").get<int>(), need(job, "k").get<int>()), ok};
}

// ---- bounds ----------------------------------------------------------------

mobility::BoundReport growth_report(const CycleClass& alpha, const DivisorClass& a) {
  mobility::BoundReport r;
  r.formula = mobility::FormulaId::weighted_growth;
  r.statement = mobility::statement(r.formula);
  r.n = alpha.variety().dimension();
  r.k = alpha.dim();
  r.hypotheses.push_back({"A very ample", a.is_very_ample()});
  r.hypotheses.push_back({"alpha pseudo-effective", ring::is_pseudoeffective(alpha)});
  if (a.is_very_ample() && ring::is_pseudoeffective(alpha)) r.value = seshadri::wmc_upper(alpha, a).value;
  return r;
}

mobility::FormulaId job_formula(const json& job) {
  if (job.contains("formula")) return mobility::formula_from_string(job["formula"].get<std::string>());
  if (job.contains("c")) return mobility::FormulaId::generic_count;
  const int variant = job.value("variant", 1);
  switch (variant) {
    case 1: return mobility::FormulaId::precise_1;
    case 2: return mobility::FormulaId::precise_2;
    case 3: return mobility::FormulaId::precise_3;
    default: throw std::invalid_argument("variant must be 1, 2 or 3");
  }
}

Outcome run_bound(const json& job, const std::optional<Integer>& s_override) {
  using mobility::FormulaId;
  const VarietySpec x = job_variety(job);
  const CycleClass alpha = io::class_from_json(x, need(job, "alpha"));
  const DivisorClass a = job_divisor(job, x);
  const FormulaId id = job_formula(job);
  const std::optional<Integer> t = job_integer(job, "t");
  const bool weighted = id == FormulaId::weighted_1 || id == FormulaId::weighted_2 || id == FormulaId::weighted_3;
  auto s_value = [&] {
    if (s_override) return *s_override;
    if (auto s = job_integer(job, "s")) return *s;
    return mobility::minimal_s(alpha, a, weighted ? pow(Rational(2), x.dimension()) : Rational(1));
  };

  mobility::BoundReport r;
  switch (id) {
    case FormulaId::generic_count: {
      const json& c = need(job, "c");
      const Rational value = c.is_string() && c.get<std::string>() == "auto" ? mobility::largest_valid_c(a)
                                                                            : io::rational_from_json(c);
      r = mobility::mc_upper_generic(alpha, a, value);
      break;
    }
    case FormulaId::precise_1: r = mobility::mc_upper_precise(alpha, a, s_value(), 1, t); break;
    case FormulaId::precise_2: r = mobility::mc_upper_precise(alpha, a, s_value(), 2, t); break;
    case FormulaId::precise_3: r = mobility::mc_upper_precise(alpha, a, s_value(), 3, t); break;
    case FormulaId::non_big: r = mobility::mc_upper_nonbig(alpha, a, s_value()); break;
    case FormulaId::mob_precise_1: r = mobility::mob_upper(alpha, a); break;
    case FormulaId::weighted_1: r = seshadri::wmc_upper_precise(alpha, a, s_value(), 1, t); break;
    case FormulaId::weighted_2: r = seshadri::wmc_upper_precise(alpha, a, s_value(), 2, t); break;
    case FormulaId::weighted_3: r = seshadri::wmc_upper_precise(alpha, a, s_value(), 3, t); break;
    case FormulaId::weighted_growth: r = growth_report(alpha, a); break;
  }
  return {io::to_json(r), r.applicable() ? ok : inapplicable};
}

Outcome run_bounds(const json& job, const Settings& settings) {
  if (!settings.sweep) return run_bound(job, std::nullopt);
  const Range range = parse_range(*settings.sweep, 1, job_integer(job, "s").value_or(Integer(1)).get_si());
  if (range.lo < 1) throw std::invalid_argument("s must be positive");
  auto parts = parallel_map(static_cast<std::size_t>(range.hi - range.lo + 1), settings.jobs,
                            [&](std::size_t i) { return run_bound(job, Integer(range.lo + static_cast<long>(i))); });
  return collect(std::move(parts), true);
}

// ---- volhat ----------------------------------------------------------------

int optimization_code(const volhat::OptimizationResult& r) {
  if (r.status == volhat::Status::infeasible) return infeasible;
  if (r.exact && r.witness) {
    const double loss = std::abs(r.exact->approx() - r.witness->approx());
    if (loss > r.tolerance.get_d() * std::max(1.0, r.value)) return tolerance;
  }
  return ok;
}

Outcome run_volhat_uncached(const json& job, const Settings& settings) {
  const VarietySpec x = job_variety(job);
  const CycleClass alpha = io::class_from_json(x, need(job, "alpha"));
  volhat::Options options;
  options.tol = parse_rational(settings.tol);
  options.grid = settings.grid;
  if (options.tol <= 0) throw std::invalid_argument("--tol must be positive");
  if (options.grid < 1) throw std::invalid_argument("--grid must be positive");

  if (settings.formulation == "sup") {
    const auto r = volhat::volhat_sup(alpha, options);
    return {{{"formulation", "sup"}, {"result", io::to_json(r)}}, optimization_code(r)};
  }
  if (settings.formulation == "xiao") {
    const auto r = volhat::volhat_curve_xiao(alpha, options);
    return {{{"formulation", "xiao"}, {"result", io::to_json(r)}}, optimization_code(r)};
  }
  if (settings.formulation == "both") {
    const auto sup = volhat::volhat_sup(alpha, options);
    const auto inf = volhat::volhat_curve_xiao(alpha, options);
    const bool holds = sup.value <= inf.value + options.tol.get_d();
    json doc = {{"formulation", "both"},
                {"sup", io::to_json(sup)},
                {"inf", io::to_json(inf)},
                {"gap", inf.value - sup.value},
                {"weak_duality_holds", holds}};
    int code = std::max(optimization_code(sup), optimization_code(inf));
    if (!holds) code = std::max(code, static_cast<int>(tolerance));
    return {doc, code};
  }
  throw std::invalid_argument("--formulation must be sup, xiao or both");
}

Outcome run_volhat(const json& job, const Settings& settings) {
  const char* dir = std::getenv("CYCLEVOL_CACHE_DIR");
  if (!dir || !*dir) return run_volhat_uncached(job, settings);

  const VarietySpec x = job_variety(job);
  const json key = {{"command", "volhat"},
                    {"variety", io::to_json(x)},
                    {"alpha", io::to_json(io::class_from_json(x, need(job, "alpha")))},
                    {"formulation", settings.formulation},
                    {"tol", io::to_json(parse_rational(settings.tol))},
                    {"grid", settings.grid},
                    {"format", 1}};
  const std::filesystem::path path = std::filesystem::path(dir) / (io::job_hash(key) + ".json");
  if (std::ifstream in(path); in) {
    try {
      const json stored = json::parse(in);
      if (stored.value("key", json()) == key) return {stored.at("doc"), stored.at("code").get<int>()};
    } catch (const json::exception&) {
      // unreadable entry: recompute and overwrite
    }
  }
  Outcome out = run_volhat_uncached(job, settings);
  std::filesystem::create_directories(dir);
  io::write_atomically(path, json{{"key", key}, {"doc", out.doc}, {"code", out.code}}.dump());
  return out;
}

// ---- seshadri / wmob ----------------------------------------------------------

Outcome run_seshadri_one(const VarietySpec& x, const DivisorClass& a, const Integer& b) {
  json doc = io::to_json(seshadri::seshadri_interval(b, a));
  doc["variety"] = io::to_json(x);
  doc["A"] = io::to_json(a);
  return {doc, ok};
}

Outcome run_seshadri(const json& job, const Settings& settings) {
  const VarietySpec x = job_variety(job);
  const DivisorClass a = job_divisor(job, x);
  if (!settings.sweep) return run_seshadri_one(x, a, io::integer_from_json(need(job, "b")));
  const Range range = parse_range(*settings.sweep, 1, job_integer(job, "b").value_or(Integer(1)).get_si());
  auto parts = parallel_map(static_cast<std::size_t>(range.hi - range.lo + 1), settings.jobs, [&](std::size_t i) {
    return run_seshadri_one(x, a, Integer(range.lo + static_cast<long>(i)));
  });
  return collect(std::move(parts), false);
}

Outcome run_wmob(const json& job, const Settings& settings) {
  const VarietySpec x = job_variety(job);
  const DivisorClass h = job_divisor(job, x, job.contains("H") ? "H" : "A");
  const int k = need(job, "k").get<int>();
  auto one = [&](const Integer& t) {
    json doc = io::to_json(seshadri::wmob_ci_bounds(h, k, t));
    doc["k"] = k;
    return Outcome{doc, ok};
  };
  if (!settings.sweep) return one(job_integer(job, "t").value_or(Integer(2)));
  const Range range = parse_range(*settings.sweep, 2, job_integer(job, "t").value_or(Integer(2)).get_si());
  auto parts = parallel_map(static_cast<std::size_t>(range.hi - range.lo + 1), settings.jobs,
                            [&](std::size_t i) { return one(Integer(range.lo + static_cast<long>(i))); });
  return collect(std::move(parts), false);
}

// ---- mc ----------------------------------------------------------------------

Outcome run_mc(const json& job) {
  const VarietySpec x = job_variety(job);
  if (job.contains("ci")) {
    const DivisorClass h = job_divisor(job, x, job.contains("H") ? "H" : "A");
    const int k = job["ci"].get<int>();
    const int m = need(job, "m").get<int>();
    const auto lower = mobility::mob_ci_lower(h, k, m);
    return {{{"points", io::to_json(lower.points)},
             {"class_scale", io::to_json(lower.class_scale)},
             {"estimate", io::to_json(lower.estimate)},
             {"target", io::to_json(ring::vol_divisor(h))}},
            ok};
  }
  const DivisorClass l = io::divisor_from_json(x, need(job, "L"));
  return {{{"h0", io::to_json(ring::h0(l))}, {"mc", io::to_json(mobility::mc_divisor_exact(l))}}, ok};
}

// ---- verify ------------------------------------------------------------------

Outcome run_verify(const Settings& settings) {
  acceptance::Options options;
  options.only.insert(settings.only.begin(), settings.only.end());
  json rows = json::array();
  bool all = true;
  for (const auto& c : acceptance::run(options)) {
    acceptance::print(std::cerr, c);
    all = all && c.passed;
    rows.push_back({{"id", c.id},
                    {"title", c.title},
                    {"passed", c.passed},
                    {"measured", c.measured},
                    {"expected", c.expected},
                    {"seconds", c.seconds}});
  }
  return {{{"passed", all}, {"criteria", rows}}, all ? ok : tolerance};
}

// ---- dispatch ------------------------------------------------------------------

Outcome dispatch(const json& job, const Settings& settings) {
  const std::string& cmd = settings.command;
  if (cmd == "constants") return run_constants(job);
  if (cmd == "bounds") return run_bounds(job, settings);
  if (cmd == "volhat") return run_volhat(job, settings);
  if (cmd == "seshadri") return run_seshadri(job, settings);
  if (cmd == "wmob") return run_wmob(job, settings);
  if (cmd == "mc") return run_mc(job);
  throw std::invalid_argument("unknown command '" + cmd + "'");
}

json list_or_json(const std::string& text) {
  if (!text.empty() && (text.front() == '[' || text.front() == '{')) return json::parse(text);
  json out = json::array();
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (item.empty()) throw std::invalid_argument("empty entry in list '" + text + "'");
    out.push_back(to_string(parse_rational(item)));
  }
  return out;
}

json read_input(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input '" + path + "'");
  return json::parse(in);
}

void emit(const json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_atomically(path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-type invariants of numerical cycle classes on products of projective spaces"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings settings;
  std::string input;
  std::string output;
  app.add_option("--input", input, "job JSON file ('-' for stdin); an array runs several jobs");
  app.add_option("--output", output, "write the report here instead of stdout");
  app.add_option("--jobs", settings.jobs, "parallel jobs for sweeps and job arrays")->check(CLI::Range(1, 256));
  app.add_option("--tol", settings.tol, "optimizer tolerance as a rational")->capture_default_str();
  app.add_option("--grid", settings.grid, "seeds per simplex axis")->capture_default_str();
  app.add_option("--sweep", settings.sweep, "sweep range lo:hi (s, b or t depending on the command)")
      ->expected(0, 1)
      ->default_str("");

  std::map<std::string, std::string> flags;
  auto text_flag = [&](CLI::App* sub, const std::string& name, const std::string& help) {
    sub->add_option_function<std::string>("--" + name, [&flags, name](const std::string& v) { flags[name] = v; },
                                           help);
  };

  auto* constants_cmd = app.add_subcommand("constants", "recursion constants eps(n,k) and tau(n,k)");
  text_flag(constants_cmd, "n", "ambient dimension");
  text_flag(constants_cmd, "k", "cycle dimension");
  text_flag(constants_cmd, "table", "print every (n,k) with n up to this value");

  auto* bounds_cmd = app.add_subcommand("bounds", "mobility count bound reports");
  auto* volhat_cmd = app.add_subcommand("volhat", "intersection-theoretic volume");
  volhat_cmd->add_option("--formulation", settings.formulation, "sup, xiao or both")
      ->check(CLI::IsMember({"sup", "xiao", "both"}));
  auto* seshadri_cmd = app.add_subcommand("seshadri", "Seshadri interval at b general points");
  auto* wmob_cmd = app.add_subcommand("wmob", "weighted mobility bounds for complete intersections");
  auto* mc_cmd = app.add_subcommand("mc", "mobility counts of complete linear series");
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  verify_cmd->add_option("--only", settings.only, "criterion ids to run");

  for (auto* sub : {bounds_cmd, volhat_cmd, seshadri_cmd, wmob_cmd, mc_cmd}) {
    text_flag(sub, "variety", "projective space dimensions, e.g. 1,1");
    text_flag(sub, "A", "divisor coordinates, e.g. 1,2");
  }
  for (auto* sub : {bounds_cmd, volhat_cmd}) {
    text_flag(sub, "alpha", "class as JSON, or dense coefficients in basis order together with --codim");
    text_flag(sub, "codim", "codimension of alpha");
  }
  text_flag(bounds_cmd, "formula", "formula id");
  text_flag(bounds_cmd, "variant", "precise variant 1, 2 or 3");
  text_flag(bounds_cmd, "s", "degree parameter s");
  text_flag(bounds_cmd, "t", "parameter t");
  text_flag(bounds_cmd, "c", "section growth constant, or 'auto'");
  text_flag(seshadri_cmd, "b", "number of general points");
  text_flag(wmob_cmd, "t", "blow-up parameter t >= 2");
  text_flag(wmob_cmd, "k", "cycle dimension");
  text_flag(mc_cmd, "L", "divisor coordinates");
  text_flag(mc_cmd, "ci", "cycle dimension for the complete intersection lower bound");
  text_flag(mc_cmd, "m", "multiple of H");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : parse;
  }

  settings.command = app.get_subcommands().front()->get_name();
  try {
    if (settings.command == "verify") {
      const Outcome out = run_verify(settings);
      emit(out.doc, output);
      return out.code;
    }

    json jobs = input.empty() ? json::object() : read_input(input);
    const bool batch = jobs.is_array();
    if (!batch) jobs = json::array({jobs});
    for (auto& job : jobs) {
      if (!job.is_object()) throw std::invalid_argument("each job must be a JSON object");
      for (const auto& [name, value] : flags) {
        if (name == "variety") {
          json parsed = list_or_json(value);
          for (auto& d : parsed)
            if (d.is_string()) d = io::integer_from_json(d).get_si();
          job[name] = parsed;
        } else if (name == "A" || name == "L") {
          job[name] = list_or_json(value);
        } else if (name == "alpha") {
          json parsed = list_or_json(value);
          job["alpha"] = parsed.is_array() ? json{{"dense", parsed}} : parsed;
        } else if (name == "formula" || name == "c" || name == "s" || name == "t" || name == "b") {
          job[name] = value;
        } else {
          job[name] = std::stol(value);
        }
      }
      if (job.contains("codim") && job.contains("alpha") && job["alpha"].is_object() && !job["alpha"].contains("codim"))
        job["alpha"]["codim"] = job["codim"];
      if (job.contains("variant") && job["variant"].is_string()) job["variant"] = std::stoi(job["variant"].get<std::string>());
    }

    Outcome out;
    if (batch) {
      out = collect(parallel_map(jobs.size(), settings.jobs, [&](std::size_t i) { return dispatch(jobs[i], settings); }),
                    false);
    } else {
      out = dispatch(jobs[0], settings);
    }
    emit(out.doc, output);
    return out.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return parse;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return internal;
  }
}
