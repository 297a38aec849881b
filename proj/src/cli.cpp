#include "tw/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tw/fredholm.hpp"
#include "tw/painleve2.hpp"
#include "tw/precision.hpp"
#include "tw/toeplitz.hpp"
#include "tw/twdist.hpp"

namespace tw::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kXLeft = -12.0;
constexpr double kXRight = 8.0;
constexpr long kDefaultBits = 256;
// the left tail series limits what the distribution functions can certify
constexpr double kDistTolerance = 1e-15;
constexpr double kToeplitzTolerance = 1e-30;

const std::map<std::string, Command> kCommands{
    {"eval", Command::eval},
    {"table", Command::table},
    {"constants", Command::constants},
    {"verify", Command::verify},
    {"oracle-compare", Command::oracle_compare},
    {"toeplitz-scan", Command::toeplitz_scan},
    {"toeplitz-limits", Command::toeplitz_limits},
};

std::string num(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

long env_bits() {
  const char* v = std::getenv("TW_PRECISION_BITS");
  if (v == nullptr || *v == '\0') return kDefaultBits;
  long bits = 0;
  const std::string_view s(v);
  const auto r = std::from_chars(s.data(), s.data() + s.size(), bits);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw UsageError("TW_PRECISION_BITS is not an integer: " + std::string(s));
  }
  return bits;
}

// One run's precision contexts plus the lazily loaded Painleve solution.
class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& err)
      : cfg_(cfg),
        err_(err),
        bits_(cfg.precision_bits.value_or(env_bits())),
        dist_(bits_, cfg.tolerance.value_or(kDistTolerance)),
        toeplitz_(bits_, cfg.tolerance.value_or(kToeplitzTolerance)),
        exact_(PrecisionContext::with_bits(bits_)) {}

  long bits() const { return bits_; }
  const PrecisionContext& dist() const { return dist_; }
  const PrecisionContext& toeplitz() const { return toeplitz_; }
  const PrecisionContext& exact() const { return exact_; }
  Real real(double v) const { return Real(v, bits_); }

  const painleve2::HMSolution& hm() {
    if (!hm_) hm_ = std::make_unique<painleve2::HMSolution>(load_or_solve());
    return *hm_;
  }
  const twdist::TailConstants& consts() {
    if (!consts_) consts_ = std::make_unique<twdist::TailConstants>(twdist::tail_constants(exact_));
    return *consts_;
  }

 private:
  painleve2::HMSolution load_or_solve() {
    const fs::path dir = cfg_.cache_dir.value_or(default_cache_dir());
    const fs::path file = dir / ("hm_" + num(kXLeft) + "_" + num(kXRight) + "_n" + std::to_string(cfg_.hm_nodes) + "_p" +
                                 std::to_string(bits_) + ".json");
    if (cfg_.use_cache && fs::exists(file)) {
      std::ifstream in(file);
      std::stringstream buf;
      buf << in.rdbuf();
      try {
        return painleve2::from_json(buf.str());
      } catch (const std::exception& e) {
        err_ << "twcalc: ignoring cache " << file.string() << ": " << e.what() << '\n';
      }
    }
    auto sol = painleve2::solve_hastings_mcleod(kXLeft, kXRight, cfg_.hm_nodes, exact_.with_tolerance(1e-30));
    if (cfg_.use_cache) {
      std::error_code ec;
      fs::create_directories(dir, ec);
      const fs::path tmp = file.string() + ".tmp";
      {
        std::ofstream out(tmp);
        out << painleve2::to_json(sol);
      }
      fs::rename(tmp, file, ec);
      if (ec) err_ << "twcalc: could not write cache " << file.string() << '\n';
    }
    return sol;
  }

  const RunConfig& cfg_;
  std::ostream& err_;
  long bits_;
  PrecisionContext dist_, toeplitz_, exact_;
  std::unique_ptr<painleve2::HMSolution> hm_;
  std::unique_ptr<twdist::TailConstants> consts_;
};

std::vector<double> grid(const RunConfig& cfg) {
  const auto count = static_cast<long>(std::floor((cfg.xmax - cfg.xmin) / cfg.step + 1e-9)) + 1;
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) xs.push_back(cfg.xmin + static_cast<double>(k) * cfg.step);
  return xs;
}

std::string flat_csv(const ordered_json& doc) {
  std::ostringstream os;
  os << "key,value\n";
  const ordered_json flat = doc.flatten();
  for (const auto& [k, v] : flat.items()) {
    os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  return os.str();
}

struct Item {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

std::string render_items(const std::vector<Item>& items, const RunConfig& cfg, const std::string& command) {
  bool all = true;
  for (const auto& it : items) all = all && it.pass;
  if (cfg.format == Format::csv) {
    std::ostringstream os;
    os << "name,value,tolerance,status\n";
    for (const auto& it : items) {
      os << it.name << ',' << num(it.value) << ',' << num(it.tolerance) << ',' << (it.pass ? "pass" : "fail") << '\n';
    }
    return os.str();
  }
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  ordered_json arr = ordered_json::array();
  for (const auto& it : items) {
    ordered_json o;
    o["name"] = it.name;
    o["value"] = it.value;
    o["tolerance"] = it.tolerance;
    o["status"] = it.pass ? "pass" : "fail";
    if (!it.note.empty()) o["error"] = it.note;
    arr.push_back(std::move(o));
  }
  doc["items"] = std::move(arr);
  doc["all_pass"] = all;
  return doc.dump(2) + "\n";
}

bool all_pass(const std::vector<Item>& items) {
  for (const auto& it : items) {
    if (!it.pass) return false;
  }
  return true;
}

// Runs fn for a named item; numeric failures become a failed item.
template <class Fn>
void check(std::vector<Item>& items, std::string name, double tolerance, Fn&& fn) {
  Item it{std::move(name), 0.0, tolerance, false, {}};
  try {
    it.value = fn();
    it.pass = it.value <= tolerance;
  } catch (const PrecisionError& e) {
    it.note = e.what();
  } catch (const ConsistencyError& e) {
    it.note = e.what();
  } catch (const SolverError& e) {
    it.note = e.what();
  }
  it.value = std::isfinite(it.value) ? it.value : 0.0;
  items.push_back(std::move(it));
}

double gap(const Real& a, const Real& b) { return abs(a - b).to_double(); }
double rel_gap(const Real& a, const Real& b) { return abs((a - b) / b).to_double(); }

std::string cmd_eval(const RunConfig& cfg, Session& s) {
  const twdist::TWPoint p = twdist::tw_point(s.real(*cfg.x), s.hm(), s.consts(), s.dist());
  if (!cfg.beta) {
    return cfg.format == Format::csv ? twdist::points_csv({p}, cfg.digits)
                                     : twdist::points_json({p}, cfg.digits) + "\n";
  }
  const Real& v = *cfg.beta == 1 ? p.F1 : *cfg.beta == 2 ? p.F2 : p.F4;
  const std::string rep = twdist::to_string(p.representation);
  if (cfg.format == Format::csv) {
    return "x,beta,value,representation\n" + num(*cfg.x) + ',' + std::to_string(*cfg.beta) + ',' +
           v.to_string(cfg.digits) + ',' + rep + '\n';
  }
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["x"] = *cfg.x;
  doc["beta"] = *cfg.beta;
  doc["value"] = v.to_string(cfg.digits);
  doc["representation"] = rep;
  return doc.dump(2) + "\n";
}

std::string cmd_table(const RunConfig& cfg, Session& s) {
  std::vector<twdist::TWPoint> pts;
  for (double x : grid(cfg)) pts.push_back(twdist::tw_point(s.real(x), s.hm(), s.consts(), s.dist()));
  if (cfg.beta) {
    std::ostringstream os;
    if (cfg.format == Format::csv) {
      os << "x,F" << *cfg.beta << '\n';
    }
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["beta"] = *cfg.beta;
    ordered_json arr = ordered_json::array();
    for (const auto& p : pts) {
      const Real& v = *cfg.beta == 1 ? p.F1 : *cfg.beta == 2 ? p.F2 : p.F4;
      os << p.x.to_string(cfg.digits) << ',' << v.to_string(cfg.digits) << '\n';
      arr.push_back({{"x", p.x.to_string(cfg.digits)}, {"value", v.to_string(cfg.digits)}});
    }
    doc["points"] = std::move(arr);
    return cfg.format == Format::csv ? os.str() : doc.dump(2) + "\n";
  }
  return cfg.format == Format::csv ? twdist::points_csv(pts, cfg.digits) : twdist::points_json(pts, cfg.digits) + "\n";
}

std::string cmd_constants(const RunConfig& cfg, Session& s) {
  const auto& c = s.consts();
  const std::vector<std::tuple<std::string, std::string, const Real*>> rows{
      {"zeta_prime_minus_one", "zeta'(-1)", &c.zeta_prime_minus_one},
      {"tau1", "2^(-11/48) e^(zeta'(-1)/2)", &c.tau1},
      {"tau2", "2^(1/24) e^(zeta'(-1))", &c.tau2},
      {"tau4", "2^(-35/48) e^(zeta'(-1)/2)", &c.tau4},
      {"f_prefactor", "2^(1/48) e^(zeta'(-1)/2)", &c.f_prefactor},
      {"e_prefactor", "2^(-1/4)", &c.e_prefactor},
  };
  if (cfg.format == Format::csv) {
    std::ostringstream os;
    os << "name,formula,value\n";
    for (const auto& [name, formula, v] : rows) os << name << ",\"" << formula << "\"," << v->to_string(cfg.digits) << '\n';
    return os.str();
  }
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["precision_bits"] = s.bits();
  for (const auto& [name, formula, v] : rows) doc["constants"][name] = {{"formula", formula}, {"value", v->to_string(cfg.digits)}};
  return doc.dump(2) + "\n";
}

std::vector<Item> verify_items(const RunConfig& cfg, Session& s) {
  std::vector<Item> items;
  const auto& tol = cfg.tol;

  std::optional<std::pair<double, double>> lr;
  const auto left_right = [&]() -> const std::pair<double, double>& {
    if (!lr) {
      double wf = 0.0, we = 0.0;
      for (double x = -9.0; x <= -1.0; x += 0.5) {
        const auto l = twdist::cdf_left(s.real(x), s.hm(), s.consts(), s.dist());
        const auto r = twdist::cdf_right(s.real(x), s.hm(), s.dist());
        wf = std::max(wf, gap(l.F, r.F));
        we = std::max(we, gap(l.E, r.E));
      }
      lr = {wf, we};
    }
    return *lr;
  };
  check(items, "left_right.F", tol.representation, [&] { return left_right().first; });
  check(items, "left_right.E", tol.representation, [&] { return left_right().second; });

  for (double c : {-2.0, -4.0, -6.0}) {
    std::optional<twdist::TotalIntegrals> ti;
    const auto total = [&]() -> const twdist::TotalIntegrals& {
      if (!ti) ti = twdist::total_integral_check(s.real(c), s.hm(), s.consts(), s.dist());
      return *ti;
    };
    const std::string at = "(c=" + num(c) + ")";
    check(items, "total_integral.R" + at, tol.total_integral, [&] { return gap(total().lhs_r, total().rhs_r); });
    check(items, "total_integral.q" + at, tol.total_integral, [&] { return gap(total().lhs_q, total().rhs_q); });
  }

  const auto& k = s.consts();
  const double exact_tol = s.exact().tolerance() * 16;
  check(items, "tau.product", exact_tol, [&] { return gap(k.tau1 * k.tau4, k.tau2 / 2); });
  check(items, "tau.ratio", exact_tol, [&] { return gap(k.tau1 / k.tau4, sqrt(s.real(2))); });
  const Real x9 = s.real(-9);
  check(items, "tau2.tail_fit(x=-9)", tol.tau2_fit, [&] {
    return rel_gap(twdist::tail_left(x9, 2, k), twdist::tw_cdf(x9, 2, s.hm(), k, s.dist()));
  });
  check(items, "tau1.tail_fit(x=-9)", tol.tau14_fit, [&] {
    return rel_gap(twdist::tail_left(x9, 1, k), twdist::tw_cdf(x9, 1, s.hm(), k, s.dist()));
  });
  check(items, "tau4.tail_fit(x=-9)", tol.tau14_fit, [&] {
    return rel_gap(twdist::tail_left(x9, 4, k), twdist::tw_cdf(x9, 4, s.hm(), k, s.dist()));
  });

  check(items, "verblunsky(t=3,q<=20)", tol.verblunsky, [&] {
    const auto led = toeplitz::determinant_ledger(toeplitz::Kind::plain, 3.0, 21, s.toeplitz(), true);
    double worst = 0.0;
    for (int q = 1; q <= 20; ++q) {
      const Real p = toeplitz::pi_zero(q, 3.0, s.toeplitz());
      const Real rhs = exp(led.log_kappa_sq(q - 1) - led.log_kappa_sq(q));
      worst = std::max({worst, gap(1.0 - p * p, rhs), gap(p, led.pi0[static_cast<std::size_t>(q)])});
    }
    return worst;
  });
  check(items, "pi_sign_alternation(t=50,10<=q<=90)", 0.0, [&] {
    const auto led = toeplitz::determinant_ledger(toeplitz::Kind::plain, 50.0, 91, s.toeplitz(), true);
    int wrong = 0;
    for (int q = 10; q <= 90; ++q) {
      if ((led.pi0[static_cast<std::size_t>(q)] < 0.0) != (q % 2 == 1)) ++wrong;
    }
    return static_cast<double>(wrong);
  });
  for (int L : {4, 8}) {
    check(items, "telescoping(t=20,x=-1,L=" + std::to_string(L) + ")", tol.telescoping, [&] {
      const auto r = toeplitz::sum_parts_report(20.0, -1.0, L, 4, s.hm(), s.toeplitz());
      return gap(r.total, r.direct);
    });
  }
  return items;
}

int cmd_oracle(const RunConfig& cfg, Session& s, std::string& text) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["m_quad"] = cfg.m_quad;
  std::ostringstream csv;
  csv << "x,painleve,fredholm,deviation\n";
  double worst = 0.0;
  ordered_json arr = ordered_json::array();
  for (double x : grid(cfg)) {
    const Real p = twdist::tw_cdf(s.real(x), 2, s.hm(), s.consts(), s.dist());
    const Real f = fredholm::f2_fredholm_at(s.real(x), cfg.m_quad, s.exact());
    const double d = gap(p, f);
    worst = std::max(worst, d);
    arr.push_back({{"x", x}, {"painleve", p.to_string(cfg.digits)}, {"fredholm", f.to_string(cfg.digits)}, {"deviation", d}});
    csv << num(x) << ',' << p.to_string(cfg.digits) << ',' << f.to_string(cfg.digits) << ',' << num(d) << '\n';
  }
  const bool pass = worst <= cfg.tol.oracle;
  doc["points"] = std::move(arr);
  doc["max_deviation"] = worst;
  doc["tolerance"] = cfg.tol.oracle;
  doc["status"] = pass ? "pass" : "fail";
  csv << "max," << ",," << num(worst) << '\n';
  text = cfg.format == Format::csv ? csv.str() : doc.dump(2) + "\n";
  return pass ? kExitOk : kExitFailed;
}

std::string cmd_scan(const RunConfig& cfg, Session& s) {
  const int q_max = cfg.q_max.value_or(std::min(static_cast<int>(2 * *cfg.t) + 10, toeplitz::kMaxDimension - 1));
  const auto scan = toeplitz::toeplitz_scan(*cfg.t, cfg.q_min, q_max, s.toeplitz());
  return cfg.format == Format::csv ? toeplitz::scan_csv(scan, cfg.digits) : toeplitz::scan_json(scan, cfg.digits) + "\n";
}

int cmd_limits(const RunConfig& cfg, Session& s, std::string& text) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  bool pass = true;
  if (cfg.side != Side::e) {
    const auto r = toeplitz::sum_parts_report(*cfg.t, *cfg.x, *cfg.L, *cfg.M, s.hm(), s.toeplitz());
    doc["F"] = ordered_json::parse(toeplitz::to_json(r, cfg.digits));
    const double d = gap(r.total, r.direct);
    doc["F_telescoping"] = {{"discrepancy", d}, {"tolerance", cfg.tol.telescoping}, {"status", d <= cfg.tol.telescoping ? "pass" : "fail"}};
    pass = pass && d <= cfg.tol.telescoping;
  }
  if (cfg.side != Side::f) {
    const auto r = toeplitz::e_double_scaling_check(*cfg.t, *cfg.x, *cfg.L, *cfg.M, s.hm(), s.toeplitz());
    doc["E"] = ordered_json::parse(toeplitz::to_json(r, cfg.digits));
    const double d = gap(r.total, r.direct);
    doc["E_telescoping"] = {{"discrepancy", d}, {"tolerance", cfg.tol.telescoping}, {"status", d <= cfg.tol.telescoping ? "pass" : "fail"}};
    pass = pass && d <= cfg.tol.telescoping;
  }
  text = cfg.format == Format::csv ? flat_csv(doc) : doc.dump(2) + "\n";
  return pass ? kExitOk : kExitFailed;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw UsageError(msg);
}

}  // namespace

std::string default_cache_dir() {
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x != nullptr && *x != '\0') {
    return (fs::path(x) / "tw-painleve").string();
  }
  const char* home = std::getenv("HOME");
  return (fs::path(home != nullptr ? home : ".") / ".cache" / "tw-painleve").string();
}

std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Tracy-Widom distributions, Toeplitz scaffolding and checks", "twcalc"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string format = "json";
  long bits = 0;
  std::string cache_dir;
  bool no_cache = false;
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--precision-bits", bits, "working precision (default $TW_PRECISION_BITS or 256)");
  app.add_option("--tolerance", cfg.tolerance, "agreement required between precision levels");
  app.add_option("-o,--output", cfg.output_path, "write to this file instead of stdout");
  app.add_option("--digits", cfg.digits, "significant digits in output")->check(CLI::Range(5, 200));
  app.add_option("--hm-nodes", cfg.hm_nodes, "collocation nodes of the Painleve solve")->check(CLI::Range(200, 20000));
  app.add_option("--cache-dir", cache_dir, "Painleve solution cache directory");
  app.add_flag("--no-cache", no_cache, "neither read nor write the solution cache");

  auto* eval = app.add_subcommand("eval", "F, E, F1, F2, F4 at one point");
  eval->add_option("--x", cfg.x)->required();
  eval->add_option("--beta", cfg.beta)->check(CLI::IsMember({1, 2, 4}));

  auto* table = app.add_subcommand("table", "distribution functions over a grid");
  table->add_option("--xmin", cfg.xmin)->required();
  table->add_option("--xmax", cfg.xmax)->required();
  table->add_option("--step", cfg.step)->required();
  table->add_option("--beta", cfg.beta)->check(CLI::IsMember({1, 2, 4}));

  app.add_subcommand("constants", "tail constants with their closed forms");

  auto* verify = app.add_subcommand("verify", "identity checks, one pass/fail line each");
  verify->add_option("--tol-representation", cfg.tol.representation);
  verify->add_option("--tol-total-integral", cfg.tol.total_integral);
  verify->add_option("--tol-tau2-fit", cfg.tol.tau2_fit);
  verify->add_option("--tol-tau14-fit", cfg.tol.tau14_fit);
  verify->add_option("--tol-verblunsky", cfg.tol.verblunsky);
  verify->add_option("--tol-telescoping", cfg.tol.telescoping);

  auto* oracle = app.add_subcommand("oracle-compare", "Painleve F2 against the Fredholm determinant");
  oracle->add_option("--xmin", cfg.xmin);
  oracle->add_option("--xmax", cfg.xmax);
  oracle->add_option("--step", cfg.step);
  oracle->add_option("--m-quad", cfg.m_quad, "quadrature nodes")->check(CLI::Range(20, 1000));
  oracle->add_option("--tol-oracle", cfg.tol.oracle);

  auto* scan = app.add_subcommand("toeplitz-scan", "kappa_q and pi_q(0) with Airy predictions");
  scan->add_option("--t", cfg.t)->required();
  scan->add_option("--q-min", cfg.q_min);
  scan->add_option("--q-max", cfg.q_max);

  auto* limits = app.add_subcommand("toeplitz-limits", "exact/Airy/Painleve decompositions");
  std::string side = "both";
  limits->add_option("--t", cfg.t)->required();
  limits->add_option("--x", cfg.x)->required();
  limits->add_option("-L,--L", cfg.L)->required();
  limits->add_option("-M,--M", cfg.M)->required();
  limits->add_option("--side", side, "F, E or both")->check(CLI::IsMember({"F", "E", "both"}));
  limits->add_option("--tol-telescoping", cfg.tol.telescoping);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.command = kCommands.at(app.get_subcommands().front()->get_name());
  cfg.format = format == "csv" ? Format::csv : Format::json;
  if (bits != 0) cfg.precision_bits = bits;
  if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
  cfg.use_cache = !no_cache;
  cfg.side = side == "F" ? Side::f : side == "E" ? Side::e : Side::both;
  return cfg;
}

void validate(const RunConfig& cfg) {
  const long bits = cfg.precision_bits.value_or(env_bits());
  require(bits >= 64 && bits <= (1L << 20), "precision bits must be in [64, 1048576]");
  if (cfg.tolerance) require(*cfg.tolerance > 0.0 && *cfg.tolerance < 1.0, "--tolerance must be in (0, 1)");
  if (cfg.output_path) {
    const fs::path parent = fs::path(*cfg.output_path).parent_path();
    require(parent.empty() || fs::is_directory(parent), "output directory does not exist: " + parent.string());
  }
  const auto in_window = [](double x) { return x >= kXLeft && x <= kXRight; };
  switch (cfg.command) {
    case Command::eval:
      require(cfg.x && in_window(*cfg.x), "eval: --x must lie in [-12, 8]");
      break;
    case Command::table:
    case Command::oracle_compare:
      require(cfg.step > 0.0, "--step must be positive");
      require(cfg.xmin <= cfg.xmax, "--xmin must not exceed --xmax");
      require(in_window(cfg.xmin) && in_window(cfg.xmax), "grid must lie in [-12, 8]");
      require((cfg.xmax - cfg.xmin) / cfg.step < 1e5, "grid has too many points");
      break;
    case Command::toeplitz_scan: {
      require(cfg.t && *cfg.t > 0.0, "toeplitz-scan: --t must be positive");
      require(cfg.q_min >= 1, "toeplitz-scan: --q-min must be >= 1");
      const int q_max = cfg.q_max.value_or(cfg.q_min);
      require(q_max >= cfg.q_min && q_max < toeplitz::kMaxDimension, "toeplitz-scan: need q-min <= q-max < 400");
      break;
    }
    case Command::toeplitz_limits:
      require(cfg.t && *cfg.t > 0.0, "toeplitz-limits: --t must be positive");
      require(cfg.x.has_value(), "toeplitz-limits: --x is required");
      require(cfg.L && *cfg.L >= (cfg.side == Side::f ? 1 : 2), "toeplitz-limits: --L too small");
      require(cfg.M && *cfg.M >= 1, "toeplitz-limits: --M must be >= 1");
      require(*cfg.x > -*cfg.M, "toeplitz-limits: need x > -M");
      break;
    case Command::constants:
    case Command::verify:
      break;
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
  } catch (const UsageError& e) {
    err << "twcalc: " << e.what() << '\n';
    return kExitUsage;
  }
  Session s(cfg, err);
  std::string text;
  int code = kExitOk;
  try {
    switch (cfg.command) {
      case Command::eval: text = cmd_eval(cfg, s); break;
      case Command::table: text = cmd_table(cfg, s); break;
      case Command::constants: text = cmd_constants(cfg, s); break;
      case Command::verify: {
        const auto items = verify_items(cfg, s);
        text = render_items(items, cfg, "verify");
        if (!all_pass(items)) code = kExitFailed;
        for (const auto& it : items) {
          if (!it.pass) err << "twcalc: verify: " << it.name << " failed" << (it.note.empty() ? "" : ": " + it.note) << '\n';
        }
        break;
      }
      case Command::oracle_compare: code = cmd_oracle(cfg, s, text); break;
      case Command::toeplitz_scan: text = cmd_scan(cfg, s); break;
      case Command::toeplitz_limits: code = cmd_limits(cfg, s, text); break;
    }
  } catch (const DomainError& e) {
    err << "twcalc: invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PrecisionError& e) {
    err << "twcalc: precision failure: " << e.what() << '\n';
    return kExitFailed;
  } catch (const ConsistencyError& e) {
    err << "twcalc: consistency failure: " << e.what() << '\n';
    return kExitFailed;
  } catch (const SolverError& e) {
    err << "twcalc: solver failure: " << e.what() << '\n';
    return kExitFailed;
  }

  if (cfg.output_path) {
    std::ofstream f(*cfg.output_path, std::ios::binary);
    f << text;
    if (!f) {
      err << "twcalc: cannot write " << *cfg.output_path << '\n';
      return kExitUsage;
    }
  } else {
    out << text;
  }
  return code;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> cfg;
  try {
    cfg = parse_args(args, out);
  } catch (const UsageError& e) {
    err << "twcalc: " << e.what() << '\n';
    return kExitUsage;
  }
  if (!cfg) return kExitOk;
  return run(*cfg, out, err);
}

}  // namespace tw::cli
