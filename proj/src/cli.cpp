#include "bellwalk/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bellwalk/asymptotics.hpp"
#include "bellwalk/closed_form.hpp"
#include "bellwalk/coin.hpp"
#include "bellwalk/continuum.hpp"
#include "bellwalk/io.hpp"
#include "bellwalk/measures.hpp"
#include "bellwalk/walk.hpp"

namespace bellwalk::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;
constexpr double kNormDriftTol = 1e-9;
constexpr double kLn2 = 0.69314718055994530942;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small parsers (fractions, angles with a pi factor, complex numbers).

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_decimal(const std::string& tok) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw UsageError("cannot parse number '" + tok + "'");
  }
  if (used != tok.size()) throw UsageError("cannot parse number '" + tok + "'");
  return v;
}

// "0.125", "1/8", "-3/10".
double parse_fraction(const std::string& raw) {
  const std::string tok = trim(raw);
  if (tok.empty()) throw UsageError("empty number");
  const size_t slash = tok.find('/');
  if (slash == std::string::npos) return parse_decimal(tok);
  const double num = parse_decimal(trim(tok.substr(0, slash)));
  const double den = parse_decimal(trim(tok.substr(slash + 1)));
  if (den == 0.0) throw UsageError("zero denominator in '" + tok + "'");
  return num / den;
}

// Angle in radians: plain number/fraction, or with a pi factor:
// "pi", "-pi/2", "3pi/8", "0.5pi".
double parse_angle(const std::string& raw) {
  const std::string tok = trim(raw);
  const size_t at = tok.find("pi");
  if (at == std::string::npos) return parse_fraction(tok);
  const double pi = kTau / 2.0;
  std::string pre = trim(tok.substr(0, at));
  std::string post = trim(tok.substr(at + 2));
  double coef = 1.0;
  if (pre == "-")
    coef = -1.0;
  else if (!pre.empty())
    coef = parse_fraction(pre);
  double den = 1.0;
  if (!post.empty()) {
    if (post.size() < 2 || post[0] != '/')
      throw UsageError("cannot parse angle '" + tok + "'");
    den = parse_fraction(trim(post.substr(1)));
    if (den == 0.0) throw UsageError("zero denominator in '" + tok + "'");
  }
  return coef * pi / den;
}

// One complex token: "1", "-0.5", "i", "-i", "2i", "1+2i", "1/2-1/2i".
cplx parse_complex(const std::string& raw) {
  std::string tok = trim(raw);
  if (tok.empty()) throw UsageError("empty complex component");

  // Split an interior +/- (not at position 0, not inside an exponent).
  size_t cut = std::string::npos;
  for (size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] != '+' && tok[i] != '-') continue;
    const char prev = tok[i - 1];
    if (prev == 'e' || prev == 'E') continue;
    cut = i;  // keep the last candidate: "1e-3-2i" cuts before "2i"
  }
  auto parse_piece = [](const std::string& piece, bool* is_imag) -> double {
    std::string p = trim(piece);
    *is_imag = !p.empty() && (p.back() == 'i' || p.back() == 'I');
    if (*is_imag) {
      p = trim(p.substr(0, p.size() - 1));
      if (p.empty() || p == "+") return 1.0;
      if (p == "-") return -1.0;
    }
    return parse_fraction(p);
  };

  if (cut == std::string::npos) {
    bool imag = false;
    const double v = parse_piece(tok, &imag);
    return imag ? cplx(0.0, v) : cplx(v, 0.0);
  }
  bool imag1 = false, imag2 = false;
  const double v1 = parse_piece(tok.substr(0, cut), &imag1);
  const double v2 = parse_piece(tok.substr(cut), &imag2);
  if (imag1 == imag2)
    throw UsageError("complex component '" + tok + "' needs one real and one imaginary part");
  return imag1 ? cplx(v2, v1) : cplx(v1, v2);
}

CoinParams parse_coin(const std::string& raw) {
  const auto parts = split(raw, ',');
  if (parts.size() != 3) throw UsageError("--coin expects x,y,z");
  return CoinParams::make(parse_fraction(parts[0]), parse_fraction(parts[1]),
                          parse_fraction(parts[2]));
}

SpinVector normalize_spin(SpinVector s) {
  const double n = std::sqrt(bellwalk::norm_squared(s));
  if (n <= 0.0) throw UsageError("initial spin must be nonzero");
  if (std::abs(n - 1.0) > 1e-6)
    throw UsageError("initial spin norm " + fmt17(n) + " deviates by more than 1e-6");
  if (std::abs(n - 1.0) > 1e-9) {
    std::cerr << "warning: renormalizing initial spin (norm " << fmt17(n) << ")\n";
    for (auto& c : s) c /= n;
  }
  return s;
}

SpinVector parse_spin(const std::string& raw) {
  const auto parts = split(raw, ',');
  if (parts.size() != 4) throw UsageError("--spin expects four components");
  SpinVector s;
  for (int i = 0; i < 4; ++i) s[i] = parse_complex(parts[i]);
  return normalize_spin(s);
}

CoinParams coin_preset(const std::string& name) {
  if (name == "p1") return CoinParams::make(1.0 / 8, 1.0 / 8, 1.0 / 10);
  if (name == "p2") return CoinParams::make(1.0 / 8, 1.0 / 12, 1.0 / 10);
  if (name == "p3") return CoinParams::make(1.0 / 6, 1.0 / 8, 1.0 / 10);
  throw UsageError("unknown coin preset '" + name + "' (use p1, p2, or p3)");
}

SpinVector spin_preset(const std::string& name) {
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "initen") return SpinVector{r, r, 0.0, 0.0};
  if (name == "renyi") return renyi_reference_spin();
  throw UsageError("unknown spin preset '" + name + "' (use initen or renyi)");
}

BasisKind parse_kind(const std::string& raw) {
  if (raw == "sine" || raw == "sin") return BasisKind::Sine;
  if (raw == "cosine" || raw == "cos") return BasisKind::Cosine;
  if (raw == "sine2" || raw == "sin2") return BasisKind::SineSq;
  if (raw == "cosine2" || raw == "cos2") return BasisKind::CosineSq;
  throw UsageError("unknown basis kind '" + raw + "' (sine|cosine|sine2|cosine2)");
}

const char* kind_name(BasisKind k) {
  switch (k) {
    case BasisKind::Sine:
      return "sine";
    case BasisKind::Cosine:
      return "cosine";
    case BasisKind::SineSq:
      return "sine2";
    default:
      return "cosine2";
  }
}

BasisTerm parse_term(const std::string& raw) {
  const auto parts = split(raw, ',');
  if (parts.size() != 4)
    throw UsageError("--term expects kind,omega,phase,decay");
  BasisTerm t;
  t.kind = parse_kind(trim(parts[0]));
  t.angularFrequency = parse_angle(parts[1]);
  t.phase = parse_angle(parts[2]);
  t.decayPower = parse_fraction(parts[3]);
  return t;
}

// ---------------------------------------------------------------------------
// Config resolution: flags > JSON config file > presets/defaults.

struct RawArgs {
  std::string coin, coinPreset, spin, spinPreset;
  int T = -1;
  std::string alpha;
  int nTheta = 8, nAlpha = 8;
  std::string window;
  std::string out = "-";
  std::string format;
  std::string observable;
  std::string siteQubit;
  bool bits = false;
  bool includeT0 = false;
  std::vector<std::string> terms;
  std::string input;
  std::string config;
};

struct Resolved {
  std::string command;
  CoinParams coin = CoinParams::make(1.0 / 8, 1.0 / 8, 1.0 / 10);
  SpinVector spin{};
  int T = 0;
  double alpha = 0.25;
  QuadratureSpec quad;
  std::optional<std::pair<int, int>> window;
  std::string out = "-";
  std::string format = "csv";
  EntropyObservable observable = EntropyObservable::SectorLabel;
  SiteQubit siteQubit = SiteQubit::KeepA;
  bool bits = false;
  bool includeT0 = false;
  std::vector<BasisTerm> terms;
  std::string input;
};

class Resolver {
 public:
  Resolver(const CLI::App* sub, const RawArgs& raw) : sub_(sub), raw_(raw) {
    if (!raw.config.empty()) {
      std::ifstream in(raw.config);
      if (!in) throw UsageError("cannot open config file '" + raw.config + "'");
      try {
        in >> cfg_;
      } catch (const std::exception& e) {
        throw UsageError(std::string("config file is not valid JSON: ") + e.what());
      }
      if (!cfg_.is_object()) throw UsageError("config file must hold a JSON object");
    }
  }

  bool flag_given(const std::string& name) const { return sub_->count(name) > 0; }
  bool cfg_has(const char* key) const { return cfg_.contains(key); }
  const json& cfg(const char* key) const { return cfg_.at(key); }

  CoinParams coin() const {
    if (flag_given("--coin")) return parse_coin(raw_.coin);
    if (flag_given("--coin-preset")) return coin_preset(raw_.coinPreset);
    if (cfg_has("coin")) {
      const json& j = cfg("coin");
      if (j.is_string()) return parse_coin(j.get<std::string>());
      if (j.is_array() && j.size() == 3) {
        std::array<double, 3> v{};
        for (int i = 0; i < 3; ++i)
          v[i] = j[i].is_string() ? parse_fraction(j[i].get<std::string>())
                                  : j[i].get<double>();
        return CoinParams::make(v[0], v[1], v[2]);
      }
      throw UsageError("config 'coin' must be \"x,y,z\" or [x, y, z]");
    }
    if (cfg_has("coinPreset")) return coin_preset(cfg("coinPreset").get<std::string>());
    return coin_preset("p1");
  }

  SpinVector spin(const std::string& fallback_preset) const {
    if (flag_given("--spin")) return parse_spin(raw_.spin);
    if (flag_given("--spin-preset")) return spin_preset(raw_.spinPreset);
    if (cfg_has("spin")) {
      const json& j = cfg("spin");
      if (j.is_string()) return parse_spin(j.get<std::string>());
      if (j.is_array() && j.size() == 4) {
        SpinVector s;
        for (int i = 0; i < 4; ++i) {
          const json& c = j[i];
          if (c.is_string())
            s[i] = parse_complex(c.get<std::string>());
          else if (c.is_number())
            s[i] = cplx(c.get<double>(), 0.0);
          else if (c.is_array() && c.size() == 2)
            s[i] = cplx(c[0].get<double>(), c[1].get<double>());
          else
            throw UsageError("config 'spin' components must be numbers, [re, im], or strings");
        }
        return normalize_spin(s);
      }
      throw UsageError("config 'spin' must be a string or a 4-element array");
    }
    if (cfg_has("spinPreset")) return spin_preset(cfg("spinPreset").get<std::string>());
    return spin_preset(fallback_preset);
  }

  int T(int fallback) const {
    if (flag_given("--T")) return raw_.T;
    if (cfg_has("T")) return cfg("T").get<int>();
    return fallback;
  }

  double alpha(double fallback) const {
    if (flag_given("--alpha")) return parse_fraction(raw_.alpha);
    if (cfg_has("alpha")) {
      const json& j = cfg("alpha");
      return j.is_string() ? parse_fraction(j.get<std::string>()) : j.get<double>();
    }
    return fallback;
  }

  QuadratureSpec quad() const {
    QuadratureSpec q;
    if (flag_given("--ntheta"))
      q.nTheta = raw_.nTheta;
    else if (cfg_has("nTheta"))
      q.nTheta = cfg("nTheta").get<int>();
    if (flag_given("--nalpha"))
      q.nAlpha = raw_.nAlpha;
    else if (cfg_has("nAlpha"))
      q.nAlpha = cfg("nAlpha").get<int>();
    return q;
  }

  std::optional<std::pair<int, int>> window() const {
    if (flag_given("--window")) {
      const auto parts = split(raw_.window, ',');
      if (parts.size() != 2) throw UsageError("--window expects t0,t1");
      return std::pair{static_cast<int>(parse_fraction(parts[0])),
                       static_cast<int>(parse_fraction(parts[1]))};
    }
    if (cfg_has("window")) {
      const json& j = cfg("window");
      if (j.is_string()) {
        const auto parts = split(j.get<std::string>(), ',');
        if (parts.size() != 2) throw UsageError("config 'window' expects \"t0,t1\"");
        return std::pair{static_cast<int>(parse_fraction(parts[0])),
                         static_cast<int>(parse_fraction(parts[1]))};
      }
      if (j.is_array() && j.size() == 2)
        return std::pair{j[0].get<int>(), j[1].get<int>()};
      throw UsageError("config 'window' must be \"t0,t1\" or [t0, t1]");
    }
    return std::nullopt;
  }

  std::string out() const {
    if (flag_given("--out")) return raw_.out;
    if (cfg_has("out")) return cfg("out").get<std::string>();
    return "-";
  }

  std::string format(const std::string& fallback) const {
    std::string f = fallback;
    if (flag_given("--format"))
      f = raw_.format;
    else if (cfg_has("format"))
      f = cfg("format").get<std::string>();
    if (f != "csv" && f != "json") throw UsageError("--format must be csv or json");
    return f;
  }

  EntropyObservable observable() const {
    std::string name = "sector";
    if (flag_given("--observable"))
      name = raw_.observable;
    else if (cfg_has("observable"))
      name = cfg("observable").get<std::string>();
    if (name == "sector") return EntropyObservable::SectorLabel;
    if (name == "coin-qubit") return EntropyObservable::CoinQubit;
    if (name == "full-spin") return EntropyObservable::FullSpin;
    throw UsageError("unknown observable '" + name + "' (sector|coin-qubit|full-spin)");
  }

  SiteQubit site_qubit() const {
    std::string name = "A";
    if (flag_given("--site-qubit"))
      name = raw_.siteQubit;
    else if (cfg_has("siteQubit"))
      name = cfg("siteQubit").get<std::string>();
    if (name == "A" || name == "a") return SiteQubit::KeepA;
    if (name == "B" || name == "b") return SiteQubit::KeepB;
    throw UsageError("unknown site qubit '" + name + "' (A|B)");
  }

  bool bits() const {
    if (flag_given("--bits")) return true;
    if (cfg_has("bits")) return cfg("bits").get<bool>();
    return false;
  }

  bool include_t0() const {
    if (flag_given("--include-t0")) return true;
    if (cfg_has("includeT0")) return cfg("includeT0").get<bool>();
    return false;
  }

  std::vector<BasisTerm> terms() const {
    std::vector<BasisTerm> out;
    if (flag_given("--term")) {
      for (const auto& t : raw_.terms) out.push_back(parse_term(t));
      return out;
    }
    if (cfg_has("terms")) {
      for (const json& j : cfg("terms")) {
        BasisTerm t;
        t.kind = parse_kind(j.at("kind").get<std::string>());
        auto num = [&j](const char* key) {
          const json& v = j.at(key);
          return v.is_string() ? parse_angle(v.get<std::string>()) : v.get<double>();
        };
        t.angularFrequency = num("omega");
        t.phase = num("phase");
        t.decayPower = j.at("decay").is_string()
                           ? parse_fraction(j.at("decay").get<std::string>())
                           : j.at("decay").get<double>();
        out.push_back(t);
      }
    }
    return out;
  }

  std::string input() const {
    if (flag_given("--input")) return raw_.input;
    if (cfg_has("input")) return cfg("input").get<std::string>();
    return "";
  }

 private:
  const CLI::App* sub_;
  const RawArgs& raw_;
  json cfg_;
};

// ---------------------------------------------------------------------------
// Output plumbing.

void emit(const std::string& path, const std::string& content) {
  if (path == "-" || path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + path + "'");
  out << content;
}

json meta_json(const Resolved& r) {
  json meta;
  meta["command"] = r.command;
  meta["coin"] = {r.coin.x, r.coin.y, r.coin.z};
  meta["T"] = r.T;
  meta["format"] = r.format;
  meta["out"] = r.out;
  if (r.command == "simulate" || r.command == "check-closed-form" ||
      r.command == "entropy-series" || r.command == "grid" || r.command == "renyi" ||
      r.command == "fit") {
    json spin = json::array();
    for (const auto& c : r.spin) spin.push_back({c.real(), c.imag()});
    meta["spin"] = spin;
  }
  if (r.command == "renyi") {
    meta["alpha"] = r.alpha;
    meta["includeT0"] = r.includeT0;
  }
  if (r.command == "epower") meta["quadrature"] = {{"nTheta", r.quad.nTheta}, {"nAlpha", r.quad.nAlpha}};
  if (r.window) meta["window"] = {r.window->first, r.window->second};
  if (r.command == "entropy-series" || r.command == "grid" || r.command == "fit") {
    meta["observable"] = r.observable == EntropyObservable::SectorLabel ? "sector"
                         : r.observable == EntropyObservable::CoinQubit ? "coin-qubit"
                                                                        : "full-spin";
    meta["bits"] = r.bits;
  }
  if (r.command == "fit" && !r.input.empty()) meta["input"] = r.input;
  return meta;
}

void check_norm(double norm_sq, int t) {
  if (std::abs(std::sqrt(norm_sq) - 1.0) > kNormDriftTol)
    throw InvariantError("norm drift |norm - 1| = " +
                         fmt17(std::abs(std::sqrt(norm_sq) - 1.0)) + " at t = " +
                         std::to_string(t));
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_simulate(const Resolved& r) {
  WalkState st = initial_state(r.spin);
  for (int t = 1; t <= r.T; ++t) {
    st = step(st, r.coin);
    check_norm(bellwalk::norm_squared(st), t);
  }

  struct Row {
    int m, n, component;
    cplx v;
  };
  std::vector<Row> rows;
  rows.reserve(4 * (st.t + 1));
  for (int k = 0; k <= st.t; ++k) {
    const int m = st.site_m(k);
    rows.push_back({m, m, 0, st.a0[k]});
    rows.push_back({m, m, 3, st.a3[k]});
    rows.push_back({m, -m, 1, st.a1[k]});
    rows.push_back({m, -m, 2, st.a2[k]});
  }
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.n != b.n) return a.n < b.n;
    return a.component < b.component;
  });

  if (r.format == "csv") {
    std::ostringstream os;
    os << "t,m,n,component,re,im\n";
    for (const Row& row : rows)
      os << r.T << ',' << row.m << ',' << row.n << ',' << row.component << ','
         << fmt17(row.v.real()) << ',' << fmt17(row.v.imag()) << '\n';
    emit(r.out, os.str());
  } else {
    json data = json::array();
    for (const Row& row : rows)
      data.push_back({{"t", r.T},
                      {"m", row.m},
                      {"n", row.n},
                      {"component", row.component},
                      {"re", row.v.real()},
                      {"im", row.v.imag()}});
    emit(r.out, json{{"meta", meta_json(r)}, {"data", data}}.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_check_closed_form(const Resolved& r) {
  double worst = 0.0;
  WalkState st = initial_state(r.spin);
  worst = std::max(worst, max_abs_diff(st, amplitudes_closed(r.spin, r.coin, 0)));
  for (int t = 1; t <= r.T; ++t) {
    st = step(st, r.coin);
    check_norm(bellwalk::norm_squared(st), t);
    worst = std::max(worst, max_abs_diff(st, amplitudes_closed(r.spin, r.coin, t)));
  }
  const bool pass = worst < 1e-10;
  json out{{"meta", meta_json(r)},
           {"data", {{"maxAbsDiff", worst}, {"tolerance", 1e-10}, {"pass", pass}}}};
  emit(r.out, out.dump(2) + "\n");
  if (!pass) {
    std::cerr << "check-closed-form: maxAbsDiff " << fmt17(worst) << " exceeds 1e-10\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

int cmd_entropy_series(const Resolved& r) {
  const MeasureSeries series =
      spin_position_entanglement(r.spin, r.coin, r.T, r.observable);
  const double scale = r.bits ? 1.0 / kLn2 : 1.0;
  if (r.format == "csv") {
    std::ostringstream os;
    os << "t,value\n";
    for (const auto& s : series.samples)
      os << s.t << ',' << fmt17(s.value * scale) << '\n';
    emit(r.out, os.str());
  } else {
    json data = json::array();
    for (const auto& s : series.samples)
      data.push_back({{"t", s.t}, {"value", s.value * scale}});
    emit(r.out, json{{"meta", meta_json(r)}, {"data", data}}.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_grid(const Resolved& r) {
  WalkState st = initial_state(r.spin);
  for (int t = 1; t <= r.T; ++t) {
    st = step(st, r.coin);
    check_norm(bellwalk::norm_squared(st), t);
  }
  const GridDistribution grid = probability_grid(st);
  double total = 0.0;
  for (const auto& e : grid.entries) total += e.value;
  if (std::abs(total - 1.0) > 1e-10)
    throw InvariantError("probability column sums to " + fmt17(total) + " at t = " +
                         std::to_string(r.T));

  const double scale = r.bits ? 1.0 / kLn2 : 1.0;
  auto site_entropy = [&](const GridEntry& e) -> std::optional<double> {
    if (e.value < kSiteProbThreshold) return std::nullopt;
    return site_entanglement(st, e.m, e.n, r.siteQubit) * scale;
  };

  if (r.format == "csv") {
    std::ostringstream os;
    os << "t,m,n,P,E_site\n";
    for (const auto& e : grid.entries) {
      const auto ent = site_entropy(e);
      os << grid.t << ',' << e.m << ',' << e.n << ',' << fmt17(e.value) << ','
         << (ent ? fmt17(*ent) : "") << '\n';
    }
    emit(r.out, os.str());
  } else {
    json data = json::array();
    for (const auto& e : grid.entries) {
      const auto ent = site_entropy(e);
      json row{{"t", grid.t}, {"m", e.m}, {"n", e.n}, {"P", e.value}};
      row["E_site"] = ent ? json(*ent) : json(nullptr);
      data.push_back(row);
    }
    emit(r.out, json{{"meta", meta_json(r)}, {"data", data}}.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_epower(const Resolved& r) {
  std::vector<double> values(r.T + 1);
  for (int t = 0; t <= r.T; ++t) values[t] = entangling_power(r.coin, t, r.quad);
  if (r.format == "csv") {
    std::ostringstream os;
    os << "t,value\n";
    for (int t = 0; t <= r.T; ++t) os << t << ',' << fmt17(values[t]) << '\n';
    emit(r.out, os.str());
  } else {
    json data = json::array();
    for (int t = 0; t <= r.T; ++t) data.push_back({{"t", t}, {"value", values[t]}});
    emit(r.out, json{{"meta", meta_json(r)}, {"data", data}}.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_renyi(const Resolved& r) {
  const RenyiSeriesPair pair =
      renyi_series(r.spin, r.coin, r.alpha, r.T, r.includeT0);
  for (const auto& s : pair.srd.samples)
    if (!s.flagged && s.value < -1e-12)
      throw InvariantError("srd sample negative at t = " + std::to_string(s.t));

  if (r.format == "csv") {
    std::ostringstream os;
    os << "t,srd,rre\n";
    for (size_t i = 0; i < pair.srd.samples.size(); ++i) {
      const auto& s = pair.srd.samples[i];
      const auto& q = pair.rre.samples[i];
      os << s.t << ',' << (s.flagged ? "" : fmt17(s.value)) << ','
         << (q.flagged ? "" : fmt17(q.value)) << '\n';
    }
    emit(r.out, os.str());
  } else {
    json data = json::array();
    for (size_t i = 0; i < pair.srd.samples.size(); ++i) {
      const auto& s = pair.srd.samples[i];
      const auto& q = pair.rre.samples[i];
      data.push_back({{"t", s.t},
                      {"srd", s.flagged ? json(nullptr) : json(s.value)},
                      {"rre", q.flagged ? json(nullptr) : json(q.value)}});
    }
    emit(r.out, json{{"meta", meta_json(r)}, {"data", data}}.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_continuum_check(const Resolved& r) {
  struct Check {
    std::string name;
    double maxError;
    double tolerance;
    bool pass;
  };
  std::vector<Check> checks;
  auto add = [&checks](const std::string& name, double err, double tol) {
    checks.push_back({name, err, tol, err <= tol});
  };

  {  // Spinor identities over the standard sweep.
    double eUU = 0.0, eVV = 0.0, eOrth = 0.0, eMass = 0.0, eSum = 0.0;
    for (double m : {0.1, 1.0, 5.0}) {
      for (int i = 0; i <= 300; ++i) {
        const double p = -10.0 + 20.0 * i / 300.0;
        const double p0 = std::hypot(p, m);
        const auto u = dirac_u(p, m);
        const auto v = dirac_v(p, m);
        const auto vneg = dirac_v(-p, m);
        const double uu = std::norm(u[0]) + std::norm(u[1]);
        const double vv = std::norm(v[0]) + std::norm(v[1]);
        const cplx ortho = std::conj(u[0]) * vneg[0] + std::conj(u[1]) * vneg[1];
        const double qm = u[0].real(), qp = u[1].real();
        eUU = std::max(eUU, std::abs(uu - 2.0 * p0));
        eVV = std::max(eVV, std::abs(vv - 2.0 * p0));
        eOrth = std::max(eOrth, std::abs(ortho));
        eMass = std::max(eMass, std::abs(qm * qm * qp * qp - m * m));
        eSum = std::max(eSum, std::abs(qp * qp + qm * qm - 2.0 * p0));
      }
    }
    add("spinor u+u = 2p0", eUU, 1e-12);
    add("spinor v+v = 2p0", eVV, 1e-12);
    add("spinor u+(p) v(-p) = 0", eOrth, 1e-12);
    add("mass identity (Q-Q+)^2 = m^2", eMass, 1e-12);
    add("sum identity Q+^2 + Q-^2 = 2p0", eSum, 1e-12);
  }
  {  // Packet normalization for the six (sigma, m) pairs.
    double worst = 0.0;
    for (double sigma : {0.5, 1.0, 4.0})
      for (double m : {0.1, 1.0}) {
        const PacketSpec spec{sigma, 0.7, 0.3};
        worst = std::max(worst, std::abs(packet_norm(spec, m) - 1.0));
      }
    add("packet normalization", worst, 1e-6);
  }
  {  // Dispersion window examples.
    double err = 0.0;
    const auto w = positive_energy_window(5.0, 3.0);
    err = std::max(err, w ? std::abs((*w)[0] + 4.0) + std::abs((*w)[1] - 4.0) : 1.0);
    const auto point = positive_energy_window(2.0, 2.0);
    err = std::max(err, point ? std::abs((*point)[0]) + std::abs((*point)[1]) : 1.0);
    err = std::max(err, positive_energy_window(1.0, 2.0) ? 1.0 : 0.0);
    add("positive energy window", err, 1e-12);
  }
  {  // Field-combination examples.
    double err = 0.0;
    ContinuumFields f = continuum_fields({0.3, 0.0, 0.0, 0.0, 0, 0});
    err = std::max(err, std::abs(f.Mplus) + std::abs(f.Mminus));  // massless
    f = continuum_fields({0.4, 0.0, 0.2, 0.7, 0, 0});
    err = std::max(err, std::abs(f.Aplus[0] - 0.4) + std::abs(f.Aminus[0] - 0.4));
    f = continuum_fields({0.0, 0.0, 0.9, 0.0, 0, 0});
    err = std::max(err, std::abs(f.Mplus) + std::abs(f.Mminus - cplx(0.9, 0.0)));
    add("continuum field combinations", err, 1e-12);
  }
  {  // Reassembly map: permutation, norm-preserving.
    double err = 0.0;
    const SpinVector s = assemble_walk_spinor({cplx(1, 0), cplx(0, 0)}, {cplx(0, 0), cplx(0, 0)});
    err = std::max(err, std::abs(s[0] - cplx(1, 0)));
    const DiracSpinor a = {cplx(0.3, 0.1), cplx(-0.2, 0.5)};
    const DiracSpinor b = {cplx(0.4, -0.6), cplx(0.1, 0.2)};
    const SpinVector w = assemble_walk_spinor(a, b);
    const double na = std::norm(a[0]) + std::norm(a[1]) + std::norm(b[0]) + std::norm(b[1]);
    err = std::max(err, std::abs(bellwalk::norm_squared(w) - na));
    add("walk spinor reassembly", err, 1e-12);
  }

  bool all = true;
  json rows = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    rows.push_back({{"name", c.name},
                    {"maxError", c.maxError},
                    {"tolerance", c.tolerance},
                    {"pass", c.pass}});
  }
  emit(r.out,
       json{{"meta", meta_json(r)}, {"data", {{"checks", rows}, {"pass", all}}}}.dump(2) +
           "\n");
  if (!all) {
    std::cerr << "continuum-check: at least one identity failed\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

MeasureSeries read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open input series '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw UsageError("input series is empty");
  MeasureSeries series;
  series.label = path;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto parts = split(trim(line), ',');
    if (parts.size() < 2) throw UsageError("bad series row '" + line + "'");
    if (trim(parts[1]).empty()) continue;  // flagged sample
    SeriesSample s;
    s.t = static_cast<int>(parse_decimal(trim(parts[0])));
    s.value = parse_decimal(trim(parts[1]));
    series.samples.push_back(s);
  }
  return series;
}

int cmd_fit(const Resolved& r) {
  MeasureSeries series;
  if (!r.input.empty()) {
    series = read_series_csv(r.input);
  } else {
    series = spin_position_entanglement(r.spin, r.coin, r.T, r.observable);
  }
  int tmax = 0;
  for (const auto& s : series.samples) tmax = std::max(tmax, s.t);
  const int t0 = r.window ? r.window->first : tmax / 2;
  const int t1 = r.window ? r.window->second : tmax;

  const double mean = tail_constant(series, t0, t1);
  json data;
  data["tailConstant"] = mean;
  data["window"] = {t0, t1};
  if (!r.terms.empty()) {
    const FitReport report = fit_tail(series, r.terms, t0, t1);
    data["constant"] = report.model.constant;
    data["amplitudes"] = report.model.amplitudes;
    data["rmsResidual"] = report.rmsResidual;
    data["maxResidual"] = report.maxResidual;
    data["sampleCount"] = report.sampleCount;
    json terms = json::array();
    for (const auto& t : report.model.terms)
      terms.push_back({{"kind", kind_name(t.kind)},
                       {"omega", t.angularFrequency},
                       {"phase", t.phase},
                       {"decay", t.decayPower}});
    data["terms"] = terms;
  }
  emit(r.out, json{{"meta", meta_json(r)}, {"data", data}}.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

void add_common_options(CLI::App* sub, RawArgs* raw, bool with_spin) {
  sub->add_option("--coin", raw->coin, "Coin angles x,y,z (fractions accepted)");
  sub->add_option("--coin-preset", raw->coinPreset, "Coin preset p1|p2|p3");
  if (with_spin) {
    sub->add_option("--spin", raw->spin, "Initial spin, four complex components");
    sub->add_option("--spin-preset", raw->spinPreset, "Spin preset initen|renyi");
  }
  sub->add_option("--T", raw->T, "Number of time steps");
  sub->add_option("--out", raw->out, "Output path ('-' for stdout)");
  sub->add_option("--config", raw->config, "JSON config file (flags override it)");
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Discrete-time quantum walk on the 2d diagonal lattice with an entangling coin"};
  app.require_subcommand(1);

  RawArgs raw;

  CLI::App* simulate = app.add_subcommand("simulate", "Evolve and dump the final state");
  add_common_options(simulate, &raw, true);
  simulate->add_option("--format", raw.format, "csv|json");

  CLI::App* check = app.add_subcommand(
      "check-closed-form", "Compare recursion and closed-form amplitudes (JSON report)");
  add_common_options(check, &raw, true);

  CLI::App* entropy = app.add_subcommand("entropy-series",
                                         "Spin-position entanglement series E(t)");
  add_common_options(entropy, &raw, true);
  entropy->add_option("--format", raw.format, "csv|json");
  entropy->add_option("--observable", raw.observable, "sector|coin-qubit|full-spin");
  entropy->add_flag("--bits", raw.bits, "Report entropies in bits instead of nats");

  CLI::App* grid = app.add_subcommand("grid", "Probability and site-entropy grid at t = T");
  add_common_options(grid, &raw, true);
  grid->add_option("--format", raw.format, "csv|json");
  grid->add_option("--site-qubit", raw.siteQubit, "Which site qubit to keep: A|B");
  grid->add_flag("--bits", raw.bits, "Report entropies in bits instead of nats");

  CLI::App* epower = app.add_subcommand("epower", "Entangling power series");
  add_common_options(epower, &raw, false);
  epower->add_option("--format", raw.format, "csv|json");
  epower->add_option("--ntheta", raw.nTheta, "Gauss-Legendre nodes per polar axis");
  epower->add_option("--nalpha", raw.nAlpha, "Trapezoid nodes per azimuthal axis");

  CLI::App* renyi = app.add_subcommand("renyi", "Sandwiched and standard relative Renyi series");
  add_common_options(renyi, &raw, true);
  renyi->add_option("--format", raw.format, "csv|json");
  renyi->add_option("--alpha", raw.alpha, "Renyi order in (0,1), fraction accepted");
  renyi->add_flag("--include-t0", raw.includeT0, "Prepend the trivial t = 0 sample");

  CLI::App* cont = app.add_subcommand("continuum-check",
                                      "Verify the continuum-limit identities (JSON report)");
  cont->add_option("--out", raw.out, "Output path ('-' for stdout)");
  cont->add_option("--config", raw.config, "JSON config file (flags override it)");

  CLI::App* fit = app.add_subcommand("fit", "Tail fit of a measure series");
  add_common_options(fit, &raw, true);
  fit->add_option("--observable", raw.observable, "sector|coin-qubit|full-spin");
  fit->add_option("--window", raw.window, "Fit window t0,t1 (default [T/2, T])");
  fit->add_option("--term", raw.terms,
                  "Basis term kind,omega,phase,decay (repeatable; angles accept 'pi')");
  fit->add_option("--input", raw.input, "Fit an existing t,value CSV instead of computing");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    Resolver res(sub, raw);

    Resolved r;
    r.command = name;
    r.out = res.out();

    if (name == "simulate") {
      r.coin = res.coin();
      r.spin = res.spin("initen");
      r.T = res.T(100);
      r.format = res.format("csv");
      if (r.T < 0) throw UsageError("--T must be >= 0");
      return cmd_simulate(r);
    }
    if (name == "check-closed-form") {
      r.coin = res.coin();
      r.spin = res.spin("initen");
      r.T = res.T(50);
      r.format = "json";
      if (r.T < 0) throw UsageError("--T must be >= 0");
      return cmd_check_closed_form(r);
    }
    if (name == "entropy-series") {
      r.coin = res.coin();
      r.spin = res.spin("initen");
      r.T = res.T(1000);
      r.format = res.format("csv");
      r.observable = res.observable();
      r.bits = res.bits();
      if (r.T < 0) throw UsageError("--T must be >= 0");
      return cmd_entropy_series(r);
    }
    if (name == "grid") {
      r.coin = res.coin();
      r.spin = res.spin("initen");
      r.T = res.T(100);
      r.format = res.format("csv");
      r.siteQubit = res.site_qubit();
      r.bits = res.bits();
      if (r.T < 0) throw UsageError("--T must be >= 0");
      return cmd_grid(r);
    }
    if (name == "epower") {
      r.coin = res.coin();
      r.T = res.T(50);
      r.format = res.format("csv");
      r.quad = res.quad();
      if (r.T < 0) throw UsageError("--T must be >= 0");
      return cmd_epower(r);
    }
    if (name == "renyi") {
      r.coin = res.coin();
      r.spin = res.spin("renyi");
      r.T = res.T(100);
      r.alpha = res.alpha(0.25);
      r.format = res.format("csv");
      r.includeT0 = res.include_t0();
      if (r.T < 1) throw UsageError("--T must be >= 1");
      return cmd_renyi(r);
    }
    if (name == "continuum-check") {
      r.format = "json";
      return cmd_continuum_check(r);
    }
    if (name == "fit") {
      r.coin = res.coin();
      r.spin = res.spin("initen");
      r.T = res.T(1000);
      r.observable = res.observable();
      r.window = res.window();
      r.terms = res.terms();
      r.input = res.input();
      r.format = "json";
      if (r.input.empty() && r.T < 1) throw UsageError("--T must be >= 1");
      return cmd_fit(r);
    }
    throw UsageError("unknown command '" + name + "'");
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace bellwalk::cli
