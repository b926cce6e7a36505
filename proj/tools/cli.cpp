// curvwave experiment runner
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "curvwave/acceptance.hpp"
#include "curvwave/freeprop.hpp"
#include "curvwave/jacobi.hpp"
#include "curvwave/kato.hpp"
#include "curvwave/oracles.hpp"
#include "curvwave/parametrix.hpp"
#include "curvwave/schrodinger.hpp"

using namespace curvwave;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Space = manifold::Space<double>;

// every key the config file may set; flags use the same names with dashes
struct Config {
  std::string space = "h3";
  double curvature = 1.0;  // |kappa0|
  std::vector<double> r = {0.5, 1.0, 2.0, 4.0};
  double delta = 0.1;
  std::string profile = "gaussian";
  double eps = 0.01;
  bool trace_free = false;
  std::string potential = "ball";
  double amplitude = 0.05;
  double radius = 1.0;
  double h = 0.01;
  double t_max = 4.0;
  double r_max = 20.0;
  double decay_t_max = 50.0;
  int ell_max = 8;
  int points = 25;
  int n_max = 12;
  double tol = 1e-6;
  int stride = 10;
  bool dump_kernels = false;
  std::uint64_t seed = 20240601;
  int threads = 1;
  std::string out_dir = "curvwave_out";
};

std::string num(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

// canonical form excludes out_dir and threads, which cannot change the payload
std::string canonical(const Config& c) {
  std::map<std::string, std::string> m;
  m["space"] = c.space;
  m["curvature"] = num(c.curvature);
  std::string rs;
  for (double r : c.r) rs += (rs.empty() ? "" : ",") + num(r);
  m["r"] = rs;
  m["delta"] = num(c.delta);
  m["profile"] = c.profile;
  m["eps"] = num(c.eps);
  m["trace_free"] = c.trace_free ? "true" : "false";
  m["potential"] = c.potential;
  m["amplitude"] = num(c.amplitude);
  m["radius"] = num(c.radius);
  m["h"] = num(c.h);
  m["t_max"] = num(c.t_max);
  m["r_max"] = num(c.r_max);
  m["decay_t_max"] = num(c.decay_t_max);
  m["ell_max"] = std::to_string(c.ell_max);
  m["points"] = std::to_string(c.points);
  m["n_max"] = std::to_string(c.n_max);
  m["tol"] = num(c.tol);
  m["stride"] = std::to_string(c.stride);
  m["dump_kernels"] = c.dump_kernels ? "true" : "false";
  m["seed"] = std::to_string(c.seed);
  std::string s;
  for (auto& [k, v] : m) s += k + "=" + v + "\n";
  return s;
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char b[20];
  std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(h));
  return b;
}

double to_double(const std::string& where, const std::string& v) {
  try {
    size_t n = 0;
    double d = std::stod(v, &n);
    if (n != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + v + "'");
  }
}

bool to_bool(const std::string& where, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(where + ": not a boolean: '" + v + "'");
}

void set_key(Config& c, const std::string& where, const std::string& k, const std::string& v) {
  auto d = [&] { return to_double(where, v); };
  auto i = [&] { return static_cast<int>(std::lround(d())); };
  if (k == "space") c.space = v;
  else if (k == "curvature") c.curvature = d();
  else if (k == "r") {
    c.r.clear();
    std::stringstream ss(v);
    for (std::string p; std::getline(ss, p, ',');) c.r.push_back(to_double(where, p));
  } else if (k == "delta") c.delta = d();
  else if (k == "profile") c.profile = v;
  else if (k == "eps") c.eps = d();
  else if (k == "trace_free") c.trace_free = to_bool(where, v);
  else if (k == "potential") c.potential = v;
  else if (k == "amplitude") c.amplitude = d();
  else if (k == "radius") c.radius = d();
  else if (k == "h") c.h = d();
  else if (k == "t_max") c.t_max = d();
  else if (k == "r_max") c.r_max = d();
  else if (k == "decay_t_max") c.decay_t_max = d();
  else if (k == "ell_max") c.ell_max = i();
  else if (k == "points") c.points = i();
  else if (k == "n_max") c.n_max = i();
  else if (k == "tol") c.tol = d();
  else if (k == "stride") c.stride = i();
  else if (k == "dump_kernels") c.dump_kernels = to_bool(where, v);
  else if (k == "seed") {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
      throw ConfigError(where + ": seed must be a non-negative integer");
    c.seed = std::stoull(v);
  }
  else if (k == "threads") c.threads = i();
  else if (k == "out_dir") c.out_dir = v;
  else throw ConfigError(where + ": unknown key '" + k + "'");
}

void load_config(Config& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    std::string where = path + ":" + std::to_string(n);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    set_key(c, where, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

Space make_space(const Config& c) {
  if (c.space == "h3") return Space::hyperbolic(std::sqrt(c.curvature));
  if (c.space == "s3") return Space::sphere(c.curvature);
  if (c.space == "r3") return Space::flat();
  throw ConfigError("space: expected h3, s3 or r3, got '" + c.space + "'");
}

void validate(const Config& c) {
  if (!(c.curvature > 0)) throw ConfigError("curvature: must be > 0");
  auto sp = make_space(c);
  if (sp.kind == manifold::Kind::Hyperbolic && !(c.delta > 0 && c.delta < sp.alpha0))
    throw ConfigError("delta: must lie in (0, alpha0) = (0, " + num(sp.alpha0) + ")");
  if (!(c.tol > 0)) throw ConfigError("tol: must be > 0");
  if (!(c.h > 0)) throw ConfigError("h: must be > 0");
  if (!(c.t_max > 0) || !(c.r_max > 0) || !(c.decay_t_max >= 1)) throw ConfigError("t_max, r_max, decay_t_max: must be positive");
  if (!(c.eps >= 0)) throw ConfigError("eps: must be >= 0");
  if (!(c.radius > 0)) throw ConfigError("radius: must be > 0");
  if (c.ell_max < 0 || c.points < 2 || c.n_max < 1 || c.stride < 1 || c.threads < 1)
    throw ConfigError("ell_max, points, n_max, stride, threads: out of range");
  for (double r : c.r)
    if (!(r > 0)) throw ConfigError("r: entries must be > 0");
  if (c.potential.rfind("file:", 0) != 0 &&
      c.potential != "zero" && c.potential != "ball" && c.potential != "gaussian" && c.potential != "exponential")
    throw ConfigError("potential: expected zero, ball, gaussian, exponential or file:<path>");
  try {
    jacobi::parse_profile(c.profile);
  } catch (const Error& e) {
    throw ConfigError(std::string("profile: ") + e.what());
  }
}

kato::RadialPotential make_potential(const Config& c) {
  if (c.potential == "zero") return kato::zero_potential();
  if (c.potential == "ball") return kato::ball_potential(c.amplitude, c.radius);
  if (c.potential == "gaussian") return kato::gaussian_potential(c.amplitude, c.radius);
  if (c.potential == "exponential") return kato::exponential_potential(c.amplitude, c.radius);
  return kato::load_potential(c.potential.substr(5));
}

// one run: checks, data payload and files, all tagged with the config hash
struct Run {
  std::string name;
  const Config& cfg;
  std::string hash;
  json checks = json::array();
  json data = json::object();
  bool ok = true;

  Run(std::string n, const Config& c) : name(std::move(n)), cfg(c), hash(fnv1a(canonical(c))) {}

  void check(const std::string& what, double measured, double tolerance, bool pass) {
    checks.push_back({{"name", what}, {"pass", pass}, {"measured", measured}, {"tolerance", tolerance}});
    ok = ok && pass;
  }

  void csv(const std::string& file, const std::string& units, const std::string& body) {
    fs::create_directories(cfg.out_dir);
    std::ofstream o(fs::path(cfg.out_dir) / file);
    o << "# curvwave " << name << " config_hash=" << hash << "\n# units: " << units << "\n" << body;
  }

  void finish(double seconds) {
    json j;
    j["experiment"] = name;
    j["config_hash"] = hash;
    j["config"] = canonical(cfg);
    j["checks"] = checks;
    j["data"] = data;
    j["pass"] = ok;
    j["wall_time"] = seconds;  // the only nondeterministic field
    fs::create_directories(cfg.out_dir);
    std::ofstream(fs::path(cfg.out_dir) / (name + ".json")) << j.dump(2) << "\n";
  }
};

std::string g17(double v) { return num(v); }

void spectral_check(Run& run) {
  const auto& c = run.cfg;
  auto sp = Space::sphere(c.curvature);
  if (c.curvature != 1.0) throw ConfigError("spectral-check: the spectral side is written for curvature 1");
  std::mt19937_64 g(c.seed);
  auto f = oracle::random_band_limited(g, 3, c.ell_max);
  auto F = freeprop::as_test_function(f);
  freeprop::Point x{oracle::random_s3_point(g)};
  std::string body = "t,geometric,spectral,abs_error\n";
  double worst = 0.0;
  for (int k = 0; k < c.points; ++k) {
    double t = 2 * pi * (k + 0.5) / c.points;
    double a = freeprop::apply_sine(sp, t, F, x), b = freeprop::spectral_sine_apply(f, t, x.x).value;
    body += g17(t) + "," + g17(a) + "," + g17(b) + "," + g17(std::abs(a - b)) + "\n";
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-8));
  }
  run.csv("spectral-check.csv", "t in units of 1/sqrt(kappa0); values dimensionless", body);
  run.check("relative error geometric vs spectral", worst, c.tol, worst <= c.tol);
}

void fundamental_integrals(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  std::string body = "r,integral,closed_form,abs_error,j_weighted,t_weighted\n";
  double worst = 0.0, jw = 0.0;
  for (double r : c.r) {
    auto f = freeprop::fundamental_integral_check(sp, r);
    body += g17(r) + "," + g17(f.integral) + "," + g17(f.closed_form) + "," + g17(std::abs(f.integral - f.closed_form)) +
            "," + g17(f.j_weighted) + "," + g17(f.t_weighted) + "\n";
    std::printf("r = %-6g  integral = %.10f  1/(4 pi j(r)) = %.10f  rel = %.2e\n", r, f.integral, f.closed_form,
                f.rel_error);
    worst = std::max(worst, f.rel_error);
    jw = std::max(jw, std::abs(4 * pi * f.j_weighted - 1));
    run.data["rows"].push_back({{"r", r}, {"integral", f.integral}, {"closed_form", f.closed_form}});
  }
  run.csv("fundamental-integrals.csv", "r geodesic distance; integrals in units of time x kernel", body);
  run.check("relative error vs 1/(4 pi j(r))", worst, 1e-8, worst <= 1e-8);
  run.check("4 pi int j|S0| dt - 1", jw, 1e-8, jw <= 1e-8);
}

void jacobi_run(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  auto field = jacobi::builtin_perturbation(jacobi::parse_profile(c.profile), c.eps, c.trace_free);
  auto p = jacobi::integrate_transport(sp.kappa0, field, c.r_max);
  std::string body = "r,dev_over_j,devprime_over_j,area,area_minus_j2\n";
  double worst = 0.0;
  int n = static_cast<int>(std::lround(c.r_max / c.h));
  for (int i = 1; i <= n; ++i) {
    double r = c.r_max * i / n, j = sp.j(r);
    double d0 = jacobi::op_norm(p.deviation(r)) / j, d1 = jacobi::op_norm(p.deviation_prime(r)) / j;
    worst = std::max({worst, d0, d1});
    if (i % c.stride == 0)
      body += g17(r) + "," + g17(d0) + "," + g17(d1) + "," + g17(p.area(r).a) + "," + g17(p.area_minus_j2(r)) + "\n";
  }
  run.csv("jacobi-run.csv", "r geodesic distance; T dimensionless per unit initial velocity", body);
  run.data["sup_deviation_over_j"] = worst;
  if (sp.kind == manifold::Kind::Hyperbolic) {
    auto s = jacobi::scattering_data(sp.kappa0, field);
    run.data["T_inf"] = {s.T_inf(0, 0), s.T_inf(0, 1), s.T_inf(1, 0), s.T_inf(1, 1)};
    run.data["l1_geodesic"] = s.l1_geodesic;
  }
  if (c.eps > 0) run.check("sup |T - jI|/j, |T' - j'I|/j over eps", worst / c.eps, 2.0, worst <= 2 * c.eps);
}

json norm_json(const kato::NormResult& n) {
  return {{"value", n.value}, {"argmax_rho", n.argmax_rho}, {"finite", n.finite}, {"diagnostic", n.diagnostic}};
}

void kato_norm(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  auto V = make_potential(c);
  kato::Sampler s;
  s.threads = c.threads;
  auto rep = kato::kato_report(sp, V, c.delta, s);
  run.data["potential"] = V.name;
  run.data["kato"] = norm_json(rep.kato);
  run.data["modified"] = norm_json(rep.modified);
  run.data["delta_norm"] = norm_json(rep.delta_norm);
  run.data["delta"] = rep.delta;
  run.data["l1"] = rep.l1;
  std::printf("kato %.10g  modified %.10g  delta %.10g  L1 %.10g\n", rep.kato.value, rep.modified.value,
              rep.delta_norm.value, rep.l1);
  run.check("norms finite", 0.0, 0.0, rep.kato.finite && rep.modified.finite && rep.delta_norm.finite);
}

json series_json(const parametrix::SeriesResult& s) {
  return {{"term_l1", s.term_l1}, {"term_sup", s.term_sup}, {"term_l1_linf", s.term_l1_linf},
          {"ratios", s.ratios}, {"terms", s.terms}, {"converged", s.converged}};
}

json kernel_samples(const parametrix::SpaceTimeKernel& K, int stride) {
  json a = json::array();
  for (int k = stride; k <= K.L.K; k += stride)
    for (int i = 1; i < k && i <= K.L.N; i += stride)
      a.push_back({{"t", K.L.t(k)}, {"r", K.L.rho(i)}, {"ac", K.ac_value(k, i)}});
  return a;
}

void parametrix_cmd(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  auto L = parametrix::make_lattice(sp, c.h, c.t_max);
  auto path = jacobi::integrate_transport(sp.kappa0, jacobi::builtin_perturbation(jacobi::parse_profile(c.profile), c.eps),
                                          c.t_max + 1);
  auto a = parametrix::area_from_path(path);
  auto S0 = parametrix::perturbed_parametrix(L, a);
  auto E = parametrix::error_kernel(L, a);
  auto s = parametrix::iterate_error_series(S0, E, c.n_max, 1e-14, c.threads);
  double C = c.eps > 0 ? parametrix::factorial_fit(s.term_l1, c.eps, c.t_max) : 0.0;
  run.data["series"] = series_json(s);
  run.data["factorial_constant"] = C;
  run.data["samples"] = kernel_samples(s.sum, c.stride * 10);
  if (c.dump_kernels) run.csv("parametrix-kernel.csv", "t, r geodesic; shell and density in lattice units", parametrix::kernel_csv(s.sum, c.stride));
  run.check("series converged", s.terms, c.n_max, s.converged);
}

void born_series(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  auto V = make_potential(c);
  auto L = parametrix::make_lattice(sp, c.h, c.t_max);
  auto s = parametrix::born_series_potential(parametrix::free_kernel(L), V, c.n_max, 1e-12, c.threads);
  run.data["series"] = series_json(s);
  double kato = kato::kato_norm(sp, V).value;
  run.data["kato_norm"] = kato;
  // compare with the characteristic solver of the radial equation
  oracle::RadialWaveReference ref(V.V, 1 / (4 * pi), c.t_max, c.h);
  std::mt19937_64 g(c.seed);
  std::uniform_int_distribution<int> K(std::max(2, L.K / 8), L.K);
  double worst = 0.0;
  json pts = json::array();
  for (int n = 0; n < 20; ++n) {
    int k = K(g);
    int i = std::uniform_int_distribution<int>(1, k - 1)(g);
    double ex = ref(L.t(k), L.rho(i)), v = s.sum.ac(k, i);
    double rel = std::abs(v - ex) / std::max(std::abs(ex), 1e-300);
    worst = std::max(worst, rel);
    pts.push_back({{"t", L.t(k)}, {"r", L.rho(i)}, {"series", v}, {"reference", ex}});
  }
  run.data["samples"] = pts;
  if (c.dump_kernels) run.csv("born-series-kernel.csv", "t, r geodesic; shell and density in lattice units", parametrix::kernel_csv(s.sum, c.stride));
  double ratio = 0.0;
  for (double r : s.ratios) ratio = std::max(ratio, r);
  run.check("relative error vs radial reference", worst, 1e-3, worst <= 1e-3);
  run.check("term ratio vs 2 |V|_K", ratio, 2 * kato, s.converged && ratio <= 2 * kato);
}

void schrodinger_decay(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  if (sp.kind != manifold::Kind::Hyperbolic || sp.alpha0 != 1.0)
    throw ConfigError("schrodinger-decay: implemented on H3 with curvature 1");
  auto V = make_potential(c);
  auto L = parametrix::make_lattice(sp, c.h, std::max(c.t_max, 12.0));
  auto S = parametrix::born_series_potential(parametrix::free_kernel(L), V, c.n_max, 1e-12, c.threads).sum;
  double r_out = std::min(c.r_max, 5.0);
  std::vector<double> ts;
  for (int k = 0; k < c.points; ++k) ts.push_back(std::exp(std::log(c.decay_t_max) * k / (c.points - 1)));
  double trunc = 0.0;
  auto rows = schrodinger::decay_scan([&](double t) {
    auto K = schrodinger::perturbed_kernel(S, t, r_out);
    trunc = std::max(trunc, K.truncation);
    if (c.dump_kernels) {
      std::string b = "r,re_K,im_K\n";
      for (size_t i = 0; i < K.r.size(); ++i) b += g17(K.r[i]) + "," + g17(K.K[i].real()) + "," + g17(K.K[i].imag()) + "\n";
      char name[64];
      std::snprintf(name, sizeof name, "schrodinger-kernel-t%.4f.csv", t);
      run.csv(name, "r geodesic; K per unit volume", b);
    }
    return K;
  }, ts);
  std::string body = "t,sup_abs_K,t32_sup_abs_K\n";
  double top = 0.0;
  for (auto& r : rows) {
    body += g17(r.t) + "," + g17(r.sup) + "," + g17(r.scaled) + "\n";
    top = std::max(top, r.scaled);
  }
  run.csv("schrodinger-decay.csv", "t time; K per unit volume", body);
  run.data["sup_scaled"] = top;
  run.data["free_constant"] = std::pow(4 * pi, -1.5);
  run.data["truncation"] = trunc;
  run.check("t^{3/2} sup|K| bounded", top, inf, std::isfinite(top));
}

void decay_scan_cmd(Run& run) {
  const auto& c = run.cfg;
  auto sp = make_space(c);
  auto V = make_potential(c);
  double T = std::max(c.t_max, 10.0), rate = sp.alpha0 - c.delta;
  auto L = parametrix::make_lattice(sp, c.h, T, 1.0);
  auto f = [](double r) { return r < 1.0 ? std::pow(1 - r * r, 3) : 0.0; };
  auto s = parametrix::born_series_potential(parametrix::free_evolution(L, f, 1.0), V, c.n_max, 1e-12, c.threads);
  std::string body = "t,sup_abs_u,weighted\n";
  int k1 = static_cast<int>(std::lround(1.0 / c.h)), mid = (k1 + L.K) / 2;
  double first = 0.0, second = 0.0;
  for (int k = k1; k <= L.K; ++k) {
    double sup = 0.0;
    for (int i = 1; i <= L.N; ++i) sup = std::max(sup, std::abs(s.sum.ac_value(k, i)));
    double w = std::sinh(rate * L.t(k)) * sup;
    (k <= mid ? first : second) = std::max(k <= mid ? first : second, w);
    if ((k - k1) % c.stride == 0) body += g17(L.t(k)) + "," + g17(sup) + "," + g17(w) + "\n";
  }
  run.csv("decay-scan.csv", "t time; u solution amplitude; weighted = sinh((alpha0 - delta) t) sup|u|", body);
  run.data["bound"] = std::max(first, second);
  run.data["kato_delta_norm"] = kato::kato_delta_norm(sp, V, c.delta).value;
  run.data["series"] = series_json(s);
  run.check("weighted sup does not grow", second / first, 1.0, s.converged && second <= first);
}

int acceptance_cmd(Run& run, const std::vector<int>& only) {
  const auto& c = run.cfg;
  acceptance::Settings s;
  s.seed = c.seed;
  s.threads = c.threads;
  std::vector<int> ids = only;
  if (ids.empty())
    for (int i = 1; i <= acceptance::criterion_count(); ++i) ids.push_back(i);
  for (int id : ids) {
    auto r = acceptance::run_criterion(id, s);
    std::printf("%s\n", acceptance::format_line(r).c_str());
    std::fflush(stdout);
    run.check(std::to_string(id) + " " + r.name, r.measured, r.tolerance, r.pass);
    run.checks.back()["detail"] = r.detail;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvwave: wave and Schroedinger propagators on S3, H3 and perturbations of H3"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h would clash with --h
  Config cfg;
  std::string config_file;
  std::map<std::string, std::string> flags;
  std::vector<int> only;

  const std::vector<std::string> keys = {"space", "curvature", "r", "delta", "profile", "eps", "trace_free",
                                         "potential", "amplitude", "radius", "h", "t_max", "r_max",
                                         "decay_t_max", "ell_max", "points", "n_max", "tol", "stride",
                                         "dump_kernels", "seed", "threads", "out_dir"};
  const std::vector<std::string> subs = {"spectral-check", "fundamental-integrals", "jacobi-run", "kato-norm",
                                         "parametrix", "born-series", "schrodinger-decay", "decay-scan",
                                         "acceptance"};
  for (auto& name : subs) {
    auto* sc = app.add_subcommand(name);
    sc->add_option("--config", config_file, "key = value file; flags override it");
    for (auto& k : keys) {
      std::string flag = "--" + k;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sc->add_option_function<std::string>(flag, [&flags, k](const std::string& v) {
        flags[k] = flags.count(k) && k == "r" ? flags[k] + "," + v : v;
      });
    }
    if (name == "acceptance") sc->add_option("--only", only, "criterion ids");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string sub = app.get_subcommands().front()->get_name();

  try {
    if (!config_file.empty()) load_config(cfg, config_file);
    for (auto& [k, v] : flags) set_key(cfg, "--" + k, k, v);
    if (const char* env = std::getenv("CURVWAVE_OUT")) cfg.out_dir = env;
    validate(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  Run run(sub, cfg);
  auto t0 = std::chrono::steady_clock::now();
  try {
    if (sub == "spectral-check") spectral_check(run);
    else if (sub == "fundamental-integrals") fundamental_integrals(run);
    else if (sub == "jacobi-run") jacobi_run(run);
    else if (sub == "kato-norm") kato_norm(run);
    else if (sub == "parametrix") parametrix_cmd(run);
    else if (sub == "born-series") born_series(run);
    else if (sub == "schrodinger-decay") schrodinger_decay(run);
    else if (sub == "decay-scan") decay_scan_cmd(run);
    else acceptance_cmd(run, only);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical error in %s: %s\n", sub.c_str(), e.what());
    run.data["error"] = e.what();
    run.ok = false;
    run.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return 3;
  }
  run.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  for (auto& ch : run.checks)
    std::printf("%s  %s\n", ch["pass"].get<bool>() ? "PASS" : "FAIL", ch["name"].get<std::string>().c_str());
  std::printf("config hash %s, report in %s\n", run.hash.c_str(), (fs::path(cfg.out_dir) / (sub + ".json")).c_str());
  return run.ok ? 0 : 1;
}
