// qdlab: command-line front end. Every command prints one JSON document.
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdl/groupoid.hpp"
#include "qdl/parallel.hpp"
#include "qdl/partition.hpp"
#include "qdl/pentagon.hpp"
#include "qdl/wgz.hpp"

using json = nlohmann::ordered_json;
using namespace qdl;

namespace {

struct Opts {
  int N = 1;
  std::string theta_arg = "1/3";
  int grid = 0;  // 0: per-command default
  double tol = -1.0;
  int threads = 1;
  std::string in, out, census;
  unsigned seed = 1;
  int samples = 0;
  std::string z = "0,0";
  int n = 0, m = 0;
  double x = 0.0, y = 0.0;
  std::string charges = "1/3,1/3";
  int k = 1;
  int gluing = -1, edge = -1;
};

json cj(cplx v) { return json::array({v.real(), v.imag()}); }

double parse_ratio(const std::string& s) {
  auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    }
    long long p = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    std::string qs = s.substr(slash + 1);
    long long q = std::stoll(qs, &used);
    if (used != qs.size() || q == 0) throw std::invalid_argument(s);
    return static_cast<double>(p) / static_cast<double>(q);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Validation, "expected p/q, got '" + s + "'");
  }
}

std::pair<double, double> parse_pair(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::Validation, "expected a,b, got '" + s + "'");
  return {parse_ratio(s.substr(0, comma)), parse_ratio(s.substr(comma + 1))};
}

cplx parse_complex(const std::string& s) {
  auto [re, im] = parse_pair(s);
  return {re, im};
}

ChargeTriple parse_charges(const std::string& s) {
  auto [a, c] = parse_pair(s);
  ChargeTriple ch = ChargeTriple::make(a, c);
  ch.validate();
  return ch;
}

double tol_or(const Opts& o, double d) { return o.tol > 0 ? o.tol : d; }
int samples_or(const Opts& o, int d) { return o.samples > 0 ? o.samples : d; }

QdParams params(const Opts& o) { return QdParams::make(parse_ratio(o.theta_arg), o.N); }

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::Validation, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ShapedTriangulation load_triangulation(const Opts& o, const std::string& fallback = "") {
  if (!o.in.empty()) return parse_triangulation(read_file(o.in));
  std::string name = o.census.empty() ? fallback : o.census;
  if (name.empty()) throw Error(ErrorKind::Validation, "need --in or --census");
  return builtin_census(name, o.N, parse_ratio(o.theta_arg));
}

std::vector<LcaPoint> sample_points(std::mt19937_64& rng, int count, int N, double lo, double hi) {
  std::uniform_real_distribution<double> X(lo, hi);
  std::uniform_int_distribution<int> n(0, N - 1);
  std::vector<LcaPoint> out;
  for (int i = 0; i < count; ++i) {
    double x = X(rng);
    out.push_back({x, n(rng)});
  }
  return out;
}

json tri_json(const ShapedTriangulation& X) { return json::parse(serialize_triangulation(X)); }

json partition_json(const ShapedTriangulation& X, const PartitionSpec& ps, const PartitionResult& r) {
  return json{{"Z", cj(r.Z)},
              {"abs", std::abs(r.Z)},
              {"grid", r.grid},
              {"error_estimate", r.error_estimate},
              {"Z_half", cj(r.Z_half)},
              {"internal_edges", r.internal_edges},
              {"params", {{"N", X.N}, {"theta_arg_over_pi", X.theta_arg}, {"tets", X.tets.size()}, {"target", ps.target}}}};
}

// ---- checks; each returns the document and sets pass

json check_inversion(const Opts& o) {
  QdParams p = params(o);
  std::mt19937_64 rng(o.seed);
  double worst = 0.0;
  for (auto s : sample_points(rng, samples_or(o, 100), o.N, -3.0, 3.0)) worst = std::max(worst, inversion_residual(s.x, s.n, p));
  double tol = tol_or(o, 1e-9);
  return {{"N", o.N}, {"theta_arg", o.theta_arg}, {"samples", samples_or(o, 100)}, {"max_residual", worst}, {"tol", tol}, {"pass", worst < tol}};
}

json check_fourier(const Opts& o) {
  QdParams p = params(o);
  std::mt19937_64 rng(o.seed);
  QuadratureSpec spec;
  double worst = 0.0;
  for (auto s : sample_points(rng, samples_or(o, 20), o.N, 0.1, 1.2)) {
    double y = (rng() & 1) ? s.x : -s.x;
    worst = std::max(worst, fourier_formula_residual(y, s.n, p, spec));
  }
  double tol = tol_or(o, 1e-6);
  return {{"N", o.N}, {"theta_arg", o.theta_arg}, {"samples", samples_or(o, 20)}, {"max_residual", worst}, {"tol", tol}, {"pass", worst < tol}};
}

json check_charged(const Opts& o) {
  QdParams p = params(o);
  std::mt19937_64 rng(o.seed);
  QuadratureSpec spec;
  std::vector<ChargeTriple> triples{{1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.3, 0.2}, {0.2, 0.25, 0.55}};
  ChargedResiduals worst;
  for (auto& ch : triples) {
    std::vector<ChargedSample> ss;
    for (auto s : sample_points(rng, samples_or(o, 10), o.N, -1.5, 1.5)) ss.push_back({s.x, s.n});
    auto r = charged_identity_residuals(ch, ss, p, spec);
    worst.f1 = std::max(worst.f1, r.f1);
    worst.f2_reflect = std::max(worst.f2_reflect, r.f2_reflect);
    worst.f2_transform = std::max(worst.f2_transform, r.f2_transform);
    worst.f3 = std::max(worst.f3, r.f3);
    worst.f3_paths = std::max(worst.f3_paths, r.f3_paths);
  }
  double tq = tol_or(o, 1e-6), tc = 1e-8;
  bool pass = worst.f1 < tq && worst.f2_reflect < tc && worst.f2_transform < tc && worst.f3 < tc && worst.f3_paths < tc;
  return {{"N", o.N},
          {"theta_arg", o.theta_arg},
          {"triples", triples.size()},
          {"samples_per_triple", samples_or(o, 10)},
          {"f1", worst.f1},
          {"f2_reflect", worst.f2_reflect},
          {"f2_transform", worst.f2_transform},
          {"f3", worst.f3},
          {"f3_paths", worst.f3_paths},
          {"tol_quadrature", tq},
          {"tol_closed_form", tc},
          {"pass", pass}};
}

PentagonCharges pentagon_setup(const Opts& o, std::mt19937_64& rng) {
  auto pc = solve_pentagon_charges({1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto ab = sample_points(rng, 2, o.N, -0.5, 0.5);
  pc.alpha = ab[0];
  pc.beta = ab[1];
  return pc;
}

json pentagon_json(const PentagonReport& r, double tol) {
  return {{"grid", r.grid}, {"residuals", r.residuals}, {"max_residual", r.max_residual},
          {"coarse_max_residual", r.coarse_max_residual}, {"bshift", r.bshift}, {"tol", tol},
          {"pass", r.max_residual < tol}};
}

json check_pentagon(const Opts& o) {
  QdParams p = params(o);
  std::mt19937_64 rng(o.seed);
  QuadratureSpec spec;
  spec.grid = o.grid ? o.grid : 256;
  PentagonCharges pc = pentagon_setup(o, rng);
  std::vector<BetaSample> bs;
  for (int i = 0; i < samples_or(o, 5); ++i) {
    auto v = sample_points(rng, 4, o.N, -0.8, 0.8);
    bs.push_back({v[0], v[1], v[2], v[3]});
  }
  json j = {{"N", o.N}, {"theta_arg", o.theta_arg}};
  PentagonReport r = check_charged_beta_pentagon(pc, bs, p, spec);
  j.update(pentagon_json(r, tol_or(o, 1e-4)));
  j["max_residual_up_to_sign"] = r.max_residual_up_to_sign;
  return j;
}

json check_faddeev_type_cmd(const Opts& o) {
  QdParams p = params(o);
  std::mt19937_64 rng(o.seed);
  QuadratureSpec spec;
  spec.grid = o.grid ? o.grid : 256;
  PentagonCharges pc = pentagon_setup(o, rng);
  std::vector<PairSample> ps;
  for (int i = 0; i < samples_or(o, 5); ++i) {
    auto v = sample_points(rng, 2, o.N, -0.8, 0.8);
    ps.push_back({v[0], v[1]});
  }
  double tol = tol_or(o, 1e-4);
  json j = {{"N", o.N}, {"theta_arg", o.theta_arg}};
  j.update(pentagon_json(check_faddeev_type(pc, ps, p, spec), tol));
  auto g = check_faddeev_type_gaussian_control(ps, p, spec);
  j["gaussian_control_max_residual"] = g.max_residual;
  j["gaussian_control_rejected"] = g.max_residual > tol;
  j["pass"] = j["pass"].get<bool>() && g.max_residual > tol;
  return j;
}

json check_groupoid_cmd(const Opts& o) {
  auto r = check_groupoid(o.seed, std::max(100, samples_or(o, 100)));
  json checks = json::array();
  for (auto& c : r.checks) {
    json e = {{"name", c.name}, {"samples", c.samples}, {"skipped", c.skipped}, {"pass", c.pass}};
    if (c.witness) e["witness"] = *c.witness;
    checks.push_back(e);
  }
  return {{"checks", checks}, {"pass", r.pass()}};
}

json check_descent(const Opts& o) {
  ShapedTriangulation X = load_triangulation(o, "fig8_2tet");
  QuadratureSpec spec;
  std::mt19937_64 rng(o.seed);
  const double s = std::sqrt(static_cast<double>(X.N));
  std::uniform_real_distribution<double> U(0.0, s);
  double worst = 0.0;
  std::vector<double> per_tet(X.tets.size(), 0.0);
  for (int i = 0; i < samples_or(o, 5); ++i) {
    std::vector<double> st(X.num_edges);
    for (auto& v : st) v = U(rng);
    cplx b = boltzmann_product(X, st, spec);
    for (int e = 0; e < X.num_edges; ++e) {
      auto t = st;
      t[e] += s;
      worst = std::max(worst, std::abs(boltzmann_product(X, t, spec) - b) / std::abs(b));
      for (std::size_t T = 0; T < X.tets.size(); ++T) {
        cplx w0 = boltzmann_weight(X, static_cast<int>(T), st, spec), w1 = boltzmann_weight(X, static_cast<int>(T), t, spec);
        per_tet[T] = std::max(per_tet[T], std::abs(w1 - w0) / std::abs(w0));
      }
    }
  }
  double tol = tol_or(o, 1e-8);
  return {{"N", X.N}, {"tets", X.tets.size()}, {"edges", X.num_edges}, {"samples", samples_or(o, 5)},
          {"max_relative_change", worst}, {"per_tet_max_relative_change", per_tet}, {"tol", tol}, {"pass", worst < tol}};
}

json direction_rows(const ShapedTriangulation& X, const std::vector<std::vector<double>>& dirs, const PartitionSpec& ps,
                    double z0, double& worst) {
  json rows = json::array();
  for (auto& d : dirs) {
    std::vector<double> nd(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) nd[i] = -d[i];
    for (double eps : {0.5 * positivity_margin(X, d), -0.5 * positivity_margin(X, nd)}) {
      auto r = partition_function(balanced_perturbation(X, d, eps), ps, false);
      double rel = std::abs(std::abs(r.Z) - z0) / z0;
      worst = std::max(worst, rel);
      rows.push_back({{"eps", eps}, {"abs_Z", std::abs(r.Z)}, {"relative_change", rel}, {"error_estimate", r.error_estimate}});
    }
  }
  return rows;
}

json check_gauge(const Opts& o) {
  ShapedTriangulation X = load_triangulation(o, "fig8_2tet");
  PartitionSpec ps;
  ps.M = o.grid ? o.grid : 128;
  double z0 = std::abs(partition_function(X, ps, false).Z);
  double wb = 0.0, wg = 0.0;
  json bal = direction_rows(X, balanced_kernel(X), ps, z0, wb);
  json gau = direction_rows(X, gauge_kernel(X), ps, z0, wg);
  double tol = tol_or(o, 1e-3);
  return {{"N", X.N},
          {"grid", ps.M},
          {"abs_Z", z0},
          {"balanced_directions", bal},
          {"balanced_max_relative_change", wb},
          {"balanced_pass", wb < tol},
          {"gauge_directions", gau},
          {"gauge_max_relative_change", wg},
          {"tol", tol},
          {"pass", wg < tol}};
}

json wgz_cmd(const Opts& o) {
  cplx b = std::sqrt(cplx(o.k / 2.0, 0.3));
  auto r = wgz_check(o.k, o.grid ? o.grid : 256, o.seed, b);
  double tol = tol_or(o, 1e-10);
  bool pass = r.roundtrip < tol && r.quasi_u < tol && r.quasi_v < tol && r.vtilde_cycle_exact && r.uv_commutation < 1e-9 &&
              r.u_utilde < 1e-9;
  return {{"k", r.k},
          {"grid", r.grid},
          {"b", cj(b)},
          {"roundtrip", r.roundtrip},
          {"forward_inverse", r.forward_inverse},
          {"quasi_periodicity_u", r.quasi_u},
          {"quasi_periodicity_v", r.quasi_v},
          {"vtilde_cycle_exact", r.vtilde_cycle_exact},
          {"v_power_k_shift", r.vk_shift},
          {"vu_commutation", r.uv_commutation},
          {"u_utilde_commutation", r.u_utilde},
          {"plain_l2_ratio", r.plain_l2_ratio},
          {"tol", tol},
          {"pass", pass}};
}

void emit(const Opts& o, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out);
    if (!f) throw Error(ErrorKind::Validation, "cannot write " + o.out);
    f << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qdlab: quantum dilogarithm over R + Z/N and state-integral tools"};
  app.require_subcommand(1);
  app.fallthrough();
  Opts o;
  app.add_option("--N", o.N, "level N >= 1");
  app.add_option("--theta-arg", o.theta_arg, "arg(theta)/pi as p/q, in (0, 1/2)");
  app.add_option("--grid", o.grid, "grid size M");
  app.add_option("--tol", o.tol, "pass threshold");
  app.add_option("--threads", o.threads, "worker threads");
  app.add_option("--in", o.in, "input triangulation JSON");
  app.add_option("--out", o.out, "output path");
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--samples", o.samples, "sample count");
  app.add_option("--census", o.census, "built-in triangulation name");
  app.add_option("--z", o.z, "complex argument re,im");
  app.add_option("--x", o.x, "real part of the first point");
  app.add_option("--n", o.n, "residue of the first point");
  app.add_option("--y", o.y, "real part of the second point");
  app.add_option("--m", o.m, "residue of the second point");
  app.add_option("--charges", o.charges, "shape angles a,c (b = 1 - a - c)");
  app.add_option("--k", o.k, "WGZ level");
  app.add_option("--gluing", o.gluing, "gluing index for a 2-3 move");
  app.add_option("--edge", o.edge, "edge class for a 3-2 move");

  std::string which;
  auto* phi = app.add_subcommand("phi", "Faddeev's function at --z");
  auto* dth = app.add_subcommand("dtheta", "D_theta(--z, --n)");
  auto* gam = app.add_subcommand("gamma", "Gaussian integral constant");
  auto* psi = app.add_subcommand("psi", "charged dilogarithm at (--z, --n)");
  auto* ker = app.add_subcommand("kernel", "weight kernel at ((--x,--n),(--y,--m))");
  auto* par = app.add_subcommand("partition", "partition function");
  auto* pac = app.add_subcommand("pachner", "2-3 (--gluing) or 3-2 (--edge) move");
  auto* cen = app.add_subcommand("census", "built-in triangulations");
  auto* wgz = app.add_subcommand("wgz", "WGZ transform checks at level --k");
  auto* chk = app.add_subcommand("check", "identity checks");
  chk->fallthrough();
  chk->add_option("name", which, "inversion|fourier|charged|pentagon|faddeev-type|groupoid|descent|gauge")
      ->required()
      ->check(CLI::IsMember({"inversion", "fourier", "charged", "pentagon", "faddeev-type", "groupoid", "descent", "gauge"}));
  cen->add_option("name", o.census, "census name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (o.threads < 1) throw Error(ErrorKind::Validation, "--threads must be >= 1");
    if (o.grid < 0) throw Error(ErrorKind::Validation, "--grid must be positive");
    check_modulus(o.N);
    set_threads(o.threads);
    json j;
    bool pass = true;
    if (*phi) {
      Theta t = Theta::from_arg(parse_ratio(o.theta_arg));
      auto r = phi_theta_ex(parse_complex(o.z), t);
      j = {{"theta_arg", o.theta_arg}, {"z", cj(parse_complex(o.z))}, {"value", cj(r.value)}, {"error", r.error}, {"terms", r.terms}};
    } else if (*dth) {
      QdParams p = params(o);
      j = {{"N", o.N}, {"theta_arg", o.theta_arg}, {"x", cj(parse_complex(o.z))}, {"n", mod(o.n, o.N)},
           {"value", cj(dtheta(parse_complex(o.z), mod(o.n, o.N), p))}};
    } else if (*gam) {
      j = {{"N", o.N}, {"value", cj(gauss_gamma(o.N))}};
    } else if (*psi) {
      QdParams p = params(o);
      ChargeTriple ch = parse_charges(o.charges);
      j = {{"N", o.N}, {"theta_arg", o.theta_arg}, {"charges", {ch.a, ch.b, ch.c}}, {"x", cj(parse_complex(o.z))},
           {"n", mod(o.n, o.N)}, {"value", cj(psi_charged(ch, parse_complex(o.z), mod(o.n, o.N), p))}};
    } else if (*ker) {
      QdParams p = params(o);
      ChargeTriple ch = parse_charges(o.charges);
      WeightKernelParams w{ch, {0.0, 0}, p};
      BSumResult info;
      cplx v = weight_kernel(w, make_point(o.x, o.n, o.N), make_point(o.y, o.m, o.N), QuadratureSpec{}, &info);
      j = {{"N", o.N}, {"theta_arg", o.theta_arg}, {"charges", {ch.a, ch.b, ch.c}}, {"x", {o.x, mod(o.n, o.N)}},
           {"y", {o.y, mod(o.m, o.N)}}, {"value", cj(v)}, {"b_terms", {info.terms_lo, info.terms_hi}}};
    } else if (*par) {
      ShapedTriangulation X = load_triangulation(o);
      PartitionSpec ps;
      ps.M = o.grid ? o.grid : 128;
      ps.target = tol_or(o, 1e-3);
      j = partition_json(X, ps, partition_function(X, ps));
    } else if (*pac) {
      ShapedTriangulation X = load_triangulation(o);
      if ((o.gluing >= 0) == (o.edge >= 0)) throw Error(ErrorKind::Validation, "pass exactly one of --gluing, --edge");
      j = tri_json(o.gluing >= 0 ? pachner_23(X, o.gluing) : pachner_32(X, o.edge));
    } else if (*cen) {
      if (o.census.empty())
        j = {{"names", census_names()}};
      else
        j = tri_json(builtin_census(o.census, o.N, parse_ratio(o.theta_arg)));
    } else if (*wgz) {
      j = wgz_cmd(o);
      pass = j["pass"];
    } else if (*chk) {
      if (which == "inversion") j = check_inversion(o);
      else if (which == "fourier") j = check_fourier(o);
      else if (which == "charged") j = check_charged(o);
      else if (which == "pentagon") j = check_pentagon(o);
      else if (which == "faddeev-type") j = check_faddeev_type_cmd(o);
      else if (which == "groupoid") j = check_groupoid_cmd(o);
      else if (which == "descent") j = check_descent(o);
      else j = check_gauge(o);
      pass = j["pass"];
    }
    emit(o, j);
    return pass ? 0 : 3;
  } catch (const Error& e) {
    std::cerr << kind_name(e.kind) << ": " << e.what() << "\n";
    return exit_code(e.kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
