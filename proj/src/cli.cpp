#include "qhopf/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

#include <CLI11.hpp>

#include "qhopf/constraints.hpp"
#include "qhopf/fockrep.hpp"
#include "qhopf/hopf.hpp"
#include "qhopf/report.hpp"

namespace qhopf::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kKappaKeys = {"kappa1", "kappa2", "gamma", "gamma1", "gamma2", "g0"};
const std::vector<std::string> kOhSinghKeys = {"eps", "q", "alpha", "beta"};

struct Descr {
  const char* key;
  const char* text;
};
constexpr Descr kDescriptions[] = {
    {"kappa1", "kappa1 (complex, e.g. 0.3 or 0.5+0.2i)"},
    {"kappa2", "kappa2 (complex)"},
    {"gamma", "gamma (complex)"},
    {"gamma1", "real part of gamma"},
    {"gamma2", "imaginary part of gamma"},
    {"g0", "G(0), or G'(0) when gamma = 0 (complex, default 1)"},
    {"k", "integer k: gamma2 = (2k+1) pi / (2 xi)"},
    {"eps", "Oh-Singh eps = ln q"},
    {"q", "Oh-Singh q > 0"},
    {"alpha", "Oh-Singh alpha"},
    {"beta", "Oh-Singh beta (default 0)"},
    {"xi", "Re(kappa1 - kappa2)"},
    {"eta", "Im(kappa1 - kappa2)"},
    {"max-sector", "highest total-level sector (default 6, capped by QHOPF_MAX_SECTOR)"},
    {"dump", "write the R-matrix blocks as JSON to this file"},
    {"n-max", "last n of the table (default 10)"},
    {"ci-order", "max derivative order for the c_i conditions (default 6)"},
    {"g-order", "max derivative order for the G recursion (default 8)"},
};

const char* describe(const std::string& key) {
  for (const auto& d : kDescriptions)
    if (key == d.key) return d.text;
  return "";
}

/// Option values of one subcommand as the user typed them.
struct Values {
  std::map<std::string, std::string> text;
  std::map<std::string, CLI::Option*> options;
  bool oh_singh_flag = false;

  bool has(const std::string& key) const {
    const auto it = options.find(key);
    return (it != options.end() && it->second->count() > 0) || from_config.count(key) > 0;
  }
  const std::string& get(const std::string& key) const { return text.at(key); }
  std::set<std::string> from_config;
};

double parse_real(const Values& v, const std::string& key) {
  const std::string& s = v.get(key);
  try {
    std::size_t pos = 0;
    const double d = std::stod(s, &pos);
    if (pos == s.size() && std::isfinite(d)) return d;
  } catch (const std::exception&) {
  }
  throw UsageError("--" + key + ": not a real number: '" + s + "'");
}

int parse_int(const Values& v, const std::string& key) {
  const std::string& s = v.get(key);
  try {
    std::size_t pos = 0;
    const int i = std::stoi(s, &pos);
    if (pos == s.size()) return i;
  } catch (const std::exception&) {
  }
  throw UsageError("--" + key + ": not an integer: '" + s + "'");
}

cplx parse_cplx(const Values& v, const std::string& key) {
  try {
    return parse_complex(v.get(key));
  } catch (const std::invalid_argument& e) {
    throw UsageError("--" + key + ": " + e.what());
  }
}

bool any_of(const Values& v, const std::vector<std::string>& keys) {
  for (const auto& k : keys)
    if (v.has(k)) return true;
  return false;
}

void load_config(const std::string& path, Values& v) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "oh-singh") {
      if (!value.is_boolean()) throw UsageError("config key oh-singh must be true or false");
      if (value.get<bool>()) v.oh_singh_flag = true;
      continue;
    }
    if (key == "format" || key == "config") continue;  // handled by the caller
    const auto it = v.options.find(key);
    if (it == v.options.end()) throw UsageError("config key '" + key + "' is not an option of this command");
    if (it->second->count() > 0) continue;  // the command line wins
    if (value.is_string())
      v.text[key] = value.get<std::string>();
    else if (value.is_number_integer())
      v.text[key] = std::to_string(value.get<long long>());
    else if (value.is_number())
      v.text[key] = format_number(value.get<double>());
    else
      throw UsageError("config key '" + key + "' must be a number or a string");
    v.from_config.insert(key);
  }
}

struct Resolved {
  HopfParams params;
  std::optional<OhSinghParams> oh_singh;
  nlohmann::json input = nlohmann::json::object();
};

Resolved resolve(const Values& v) {
  const bool kappa_style = any_of(v, kKappaKeys);
  const bool oh_style = any_of(v, kOhSinghKeys);
  if (kappa_style && oh_style)
    throw UsageError("mixing (kappa1, kappa2, gamma, g0) and Oh-Singh (eps|q, alpha, beta) parameters");
  if (!kappa_style && !oh_style) throw UsageError("no parameters given");

  Resolved r;
  for (const auto& [key, opt] : v.options)
    if (v.has(key) && key != "dump") r.input[key] = v.get(key);

  try {
    if (oh_style) {
      OhSinghParams o;
      if (v.has("eps") && v.has("q")) throw UsageError("give either --eps or --q");
      if (v.has("eps")) {
        o.eps = parse_real(v, "eps");
      } else if (v.has("q")) {
        const double q = parse_real(v, "q");
        if (!(q > 0.0)) throw UsageError("--q must be positive");
        o.eps = std::log(q);
      } else {
        throw UsageError("Oh-Singh parameters need --eps or --q");
      }
      if (!v.has("alpha")) throw UsageError("Oh-Singh parameters need --alpha");
      o.alpha = parse_real(v, "alpha");
      o.beta = v.has("beta") ? parse_real(v, "beta") : 0.0;
      o.k = v.has("k") ? parse_int(v, "k") : 0;
      r.oh_singh = o;
      r.params = param_map_oh_singh(o);
      return r;
    }

    if (!v.has("kappa1") || !v.has("kappa2")) throw UsageError("need both --kappa1 and --kappa2");
    const cplx k1 = parse_cplx(v, "kappa1");
    const cplx k2 = parse_cplx(v, "kappa2");
    const cplx g0 = v.has("g0") ? parse_cplx(v, "g0") : cplx(1.0);
    cplx gamma;
    if (v.has("gamma")) {
      if (v.has("gamma1") || v.has("gamma2") || v.has("k")) throw UsageError("--gamma excludes --gamma1, --gamma2, --k");
      gamma = parse_cplx(v, "gamma");
    } else {
      const double g1 = v.has("gamma1") ? parse_real(v, "gamma1") : 0.0;
      double g2 = 0.0;
      if (v.has("gamma2") && v.has("k")) throw UsageError("--gamma2 excludes --k");
      if (v.has("gamma2")) {
        g2 = parse_real(v, "gamma2");
      } else if (v.has("k")) {
        const cplx kappa = k1 - k2;
        if (std::abs(kappa.imag()) > kBranchTolerance || std::abs(kappa.real()) < kBranchTolerance)
          throw UsageError("--k needs real nonzero kappa1 - kappa2");
        g2 = (2.0 * parse_int(v, "k") + 1.0) * std::numbers::pi / (2.0 * kappa.real());
      }
      gamma = cplx(g1, g2);
    }
    r.params = build_params(k1, k2, gamma, g0);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return r;
}

int emit(const CheckReport& report, const std::string& format, std::ostream& out,
         const nlohmann::json& extra = nlohmann::json::object(), const std::string& text_head = "") {
  if (format == "json") {
    nlohmann::json j = report.to_json();
    for (const auto& [k, val] : extra.items()) j[k] = val;
    out << j.dump(2) << '\n';
  } else {
    out << text_head << report.summary();
  }
  return report.passed() ? kAllPass : kCheckFailed;
}

int env_sector_cap() {
  const char* env = std::getenv("QHOPF_MAX_SECTOR");
  if (env == nullptr || *env == '\0') return 8;
  try {
    std::size_t pos = 0;
    const int cap = std::stoi(env, &pos);
    if (pos == std::string(env).size() && cap >= 0) return cap;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("QHOPF_MAX_SECTOR must be a nonnegative integer, got '") + env + "'");
}

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------------------
// Subcommands

int cmd_classify(const Values& v, const std::string& format, std::ostream& out) {
  CheckReport report;
  FamilyVerdict verdict;
  if (v.has("xi") || v.has("eta")) {
    if (any_of(v, {"kappa1", "kappa2", "gamma"}) || any_of(v, kOhSinghKeys))
      throw UsageError("--xi/--eta exclude the (kappa1, kappa2, gamma) and Oh-Singh parameters");
    HermiticityInput h;
    h.xi = v.has("xi") ? parse_real(v, "xi") : 0.0;
    h.eta = v.has("eta") ? parse_real(v, "eta") : 0.0;
    h.gamma1 = v.has("gamma1") ? parse_real(v, "gamma1") : 0.0;
    if (v.has("gamma2") && v.has("k")) throw UsageError("--gamma2 excludes --k");
    if (v.has("gamma2")) {
      h.gamma2 = parse_real(v, "gamma2");
    } else if (v.has("k")) {
      if (h.xi == 0.0) throw UsageError("--k needs xi != 0");
      h.gamma2 = (2.0 * parse_int(v, "k") + 1.0) * std::numbers::pi / (2.0 * h.xi);
    }
    if (v.has("g0")) {
      const cplx g0 = parse_cplx(v, "g0");
      if (g0.imag() != 0.0) throw UsageError("--g0 must be real with --xi/--eta");
      h.g0 = g0.real();
    }
    report.params = {{"xi", h.xi}, {"eta", h.eta}, {"gamma1", h.gamma1}, {"gamma2", h.gamma2}, {"g0", h.g0}};
    try {
      verdict = classify_hermiticity(h);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    const Resolved r = resolve(v);
    report.params = r.params.to_json();
    report.params["input"] = r.input;
    verdict = classify_family(r.params);
  }

  // The verdict itself is the result; the check is that the coefficient test
  // and the pointwise test agree.
  CheckEntry e;
  e.name = "pointwise_consistency";
  e.residual = verdict.pointwise_imag;
  const bool pointwise_real = verdict.pointwise_imag <= kHermiticityTolerance;
  e.status = pointwise_real == verdict.hermitian ? CheckStatus::pass : CheckStatus::fail;
  e.witness = "n = " + std::to_string(verdict.pointwise_witness);
  report.checks.push_back(e);

  std::string head = "verdict: " + verdict.label() + "\nhermitian: " + (verdict.hermitian ? "yes" : "no") +
                     "\nnotes: " + verdict.notes + "\n";
  return emit(report, format, out, {{"verdict", verdict.to_json()}}, head);
}

int cmd_verify_hopf(const Values& v, const std::string& format, std::ostream& out) {
  const Resolved r = resolve(v);
  const int ci_order = v.has("ci-order") ? parse_int(v, "ci-order") : 6;
  const int g_order = v.has("g-order") ? parse_int(v, "g-order") : 8;
  if (ci_order < 0 || ci_order > 12) throw UsageError("--ci-order must lie in 0..12");
  if (g_order < 0 || g_order > 10) throw UsageError("--g-order must lie in 0..10");

  CheckReport report;
  report.params = r.params.to_json();
  report.params["input"] = r.input;
  report.merge(check_hopf_axioms(r.params), "hopf/");
  report.merge(verify_ci_conditions(r.params, ci_order), "ci/");
  report.merge(verify_g_recursion(r.params, g_order), "g/");
  return emit(report, format, out);
}

int cmd_verify_rmatrix(const Values& v, const std::string& format, std::ostream& out) {
  const Resolved r = resolve(v);
  if (r.params.branch != Branch::generic) throw UsageError("the R-matrix needs the generic branch (kappa != 0, gamma != 0)");
  const int requested = v.has("max-sector") ? parse_int(v, "max-sector") : 6;
  if (requested < 0) throw UsageError("--max-sector must be nonnegative");
  const int cap = env_sector_cap();
  const int m_max = std::min(requested, cap);

  CheckReport report;
  report.params = r.params.to_json();
  report.params["input"] = r.input;
  report.params["max_sector"] = m_max;
  if (m_max != requested) report.params["max_sector_requested"] = requested;

  std::optional<OhSinghParams> oh = r.oh_singh;
  if (v.oh_singh_flag && !oh) {
    try {
      oh = param_map_oh_singh_inverse(r.params);
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--oh-singh: ") + e.what());
    }
  }
  if (v.oh_singh_flag) report.params["oh_singh"] = oh->to_json();

  report.merge(check_quasitriangularity(r.params, m_max), "qt/");
  report.merge(check_yang_baxter(r.params, m_max), "ybe/");
  SectorOperator dumped;
  if (v.oh_singh_flag) {
    report.merge(check_oh_singh_rmatrix(*oh, m_max), "oh_singh/");
    dumped = build_rmatrix_oh_singh(*oh, m_max);
    report.merge(check_yang_baxter(dumped, m_max), "oh_singh/");
  } else if (v.has("dump")) {
    dumped = build_rmatrix(r.params, m_max);
  }

  if (v.has("dump")) {
    std::ofstream file(v.get("dump"));
    if (!file) throw UsageError("cannot write " + v.get("dump"));
    file << sector_operator_to_json(dumped, report.params).dump(1) << '\n';
  }
  return emit(report, format, out);
}

int cmd_tabulate(const Values& v, const std::string& format, std::ostream& out) {
  const Resolved r = resolve(v);
  const int n_max = v.has("n-max") ? parse_int(v, "n-max") : 10;
  if (n_max < 0) throw UsageError("--n-max must be nonnegative");

  const HopfCoefficients c = HopfCoefficients::solved(r.params);
  const std::vector<std::pair<std::string, ExpPoly>> columns = {
      {"G", g_function(r.params)}, {"F", structure_function(r.params)},
      {"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}, {"c4", c.c4}, {"c10", c.c10}, {"c11", c.c11},
  };
  std::vector<std::vector<cplx>> rows;
  for (int n = 0; n <= n_max; ++n) {
    std::vector<cplx> row;
    for (const auto& [name, f] : columns) row.push_back(evaluate(f, static_cast<double>(n)));
    rows.push_back(std::move(row));
  }

  if (format == "json") {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["params"] = r.params.to_json();
    j["params"]["input"] = r.input;
    nlohmann::json names = nlohmann::json::array({"n"});
    for (const auto& col : columns) names.push_back(col.first);
    j["columns"] = names;
    j["rows"] = nlohmann::json::array();
    for (int n = 0; n <= n_max; ++n) {
      nlohmann::json row = nlohmann::json::array({n});
      for (cplx z : rows[n]) row.push_back(cjson(z));
      j["rows"].push_back(row);
    }
    out << j.dump(2) << '\n';
  } else {
    out << "n";
    for (const auto& col : columns) out << ',' << col.first << "_re," << col.first << "_im";
    out << '\n';
    for (int n = 0; n <= n_max; ++n) {
      out << n;
      for (cplx z : rows[n]) out << ',' << format_number(z.real()) << ',' << format_number(z.imag());
      out << '\n';
    }
  }
  return kAllPass;
}

int cmd_convert(const Values& v, const std::string& format, std::ostream& out) {
  const Resolved r = resolve(v);
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["input"] = r.input;
  if (r.oh_singh) {
    const HopfParams& p = r.params;
    j["direction"] = "oh_singh_to_kappa";
    j["kappa1"] = cjson(p.kappa1);
    j["kappa2"] = cjson(p.kappa2);
    j["gamma"] = cjson(p.gamma);
    j["g0"] = cjson(p.g0);
    j["xi"] = p.kappa.real();
    j["gamma1"] = p.gamma.real();
    j["gamma2"] = p.gamma.imag();
  } else {
    OhSinghParams o;
    try {
      o = param_map_oh_singh_inverse(r.params);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    j["direction"] = "kappa_to_oh_singh";
    j["eps"] = o.eps;
    j["q"] = std::exp(o.eps);
    j["alpha"] = o.alpha;
    j["beta"] = o.beta;
    j["k"] = o.k;
  }

  if (format == "json") {
    out << j.dump(2) << '\n';
  } else {
    for (const auto& [key, val] : j.items()) {
      if (key == "tool_version" || key == "input") continue;
      out << key << " = ";
      if (val.is_array())
        out << format_complex({val[0].get<double>(), val[1].get<double>()});
      else if (val.is_number_float())
        out << format_number(val.get<double>());
      else if (val.is_string())
        out << val.get<std::string>();
      else
        out << val.dump();
      out << '\n';
    }
  }
  return kAllPass;
}

}  // namespace

std::complex<double> parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw std::invalid_argument("empty number");

  auto real_of = [&](const std::string& t) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(t, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a complex number: '" + raw + "'");
    }
    if (pos != t.size() || !std::isfinite(d)) throw std::invalid_argument("not a complex number: '" + raw + "'");
    return d;
  };
  auto imag_of = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return real_of(t);
  };

  const char last = s.back();
  if (last != 'i' && last != 'j') return {real_of(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  // Split at the last sign that is not a leading sign or part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {real_of(body.substr(0, split)), imag_of(body.substr(split))};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hopf structures on generalized deformed oscillator algebras: checks and tables", "qhopf"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  std::string config;
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--config", config, "JSON file with option values; command-line flags take precedence");
  app.set_version_flag("--version", kToolVersion);

  struct Sub {
    CLI::App* app;
    Values values;
  };
  std::map<std::string, Sub> subs;
  auto add_sub = [&](const std::string& name, const std::string& help, const std::vector<std::string>& keys) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, help);
    for (const auto& key : keys) s.values.options[key] = s.app->add_option("--" + key, s.values.text[key], describe(key));
    return &s;
  };

  std::vector<std::string> params = kKappaKeys;
  params.insert(params.end(), kOhSinghKeys.begin(), kOhSinghKeys.end());
  params.push_back("k");

  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> keys = params;
    keys.insert(keys.end(), extra.begin(), extra.end());
    return keys;
  };
  add_sub("classify", "Hermiticity verdict and family label", with({"xi", "eta"}));
  add_sub("verify-hopf", "Hopf axioms, c_i conditions and the G recursion", with({"ci-order", "g-order"}));
  Sub* rm = add_sub("verify-rmatrix", "Quasitriangularity and Yang-Baxter checks per sector",
                    with({"max-sector", "dump"}));
  rm->app->add_flag("--oh-singh", rm->values.oh_singh_flag, "also build the Oh-Singh form of R and compare");
  add_sub("tabulate", "G(n), F(n) and c_i(n) as CSV (re/im pairs)", with({"n-max"}));
  add_sub("convert-params", "Convert between (kappa1, kappa2, gamma, G0) and Oh-Singh (q, alpha, beta, k)", params);

  std::vector<const char*> argv{"qhopf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kAllPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kAllPass;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << '\n';
    return kAllPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Values& v = subs.at(name).values;
  nlohmann::json echo;
  try {
    if (!config.empty()) load_config(config, v);
    if (name == "classify") return cmd_classify(v, format, out);
    if (name == "verify-hopf") return cmd_verify_hopf(v, format, out);
    if (name == "verify-rmatrix") return cmd_verify_rmatrix(v, format, out);
    if (name == "tabulate") return cmd_tabulate(v, format, out);
    return cmd_convert(v, format, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << subs.at(name).app->help();
    return kUsageError;
  } catch (const OverflowError& e) {
    CheckReport report;
    report.params = nlohmann::json::object();
    for (const auto& [key, opt] : v.options)
      if (v.has(key)) report.params[key] = v.get(key);
    report.add_failure("overflow", e.what());
    return emit(report, format, out);
  } catch (const std::domain_error& e) {
    CheckReport report;
    report.add_failure("domain_error", e.what());
    return emit(report, format, out);
  }
}

}  // namespace qhopf::cli
