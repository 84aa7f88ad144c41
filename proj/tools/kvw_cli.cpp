// kvw: command-line front end.  Exit status 0 when every check passes, 1 on
// any failed check, 2 on unreadable or invalid input.
#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include "kvw/bundle.hpp"
#include "kvw/error.hpp"
#include "kvw/heisenberg.hpp"
#include "kvw/hermitian.hpp"
#include "kvw/io.hpp"
#include "kvw/verification.hpp"
#include "kvw/wavefunctions.hpp"

using namespace kvw;

namespace {

struct RunConfig {
  std::string command;
  std::string input;
  double tol = 1e-12;
  std::size_t points = 48;
  double samples = 1e6;
  std::uint64_t seed = 0;
  std::string format = "human";
  std::string scheme = "auto";
};

struct Report {
  Json results = Json::object();
  std::vector<Check> checks;

  void check(Check c) { checks.push_back(std::move(c)); }
  bool pass() const {
    for (const auto& c : checks)
      if (c.verdict == Verdict::Fail) return false;
    return true;
  }
};

Json labels(const std::vector<PiElement>& basis) {
  Json out = Json::array();
  for (const auto& c : basis) {
    Json v = Json::array();
    for (std::size_t i = 0; i < c.size(); ++i) v.push_back(to_string(c.exact(i)));
    out.push_back(v);
  }
  return out;
}

Json gram_json(const GramReport& r) {
  Json j;
  j["scheme"] = to_string(r.scheme);
  j["evaluations"] = r.evaluations;
  j["basis"] = labels(r.basis);
  j["matrix"] = to_json(r.matrix);
  j["stderr"] = to_json(r.std_error);
  j["mean_diagonal"] = r.mean_diagonal;
  j["off_diagonal"] = r.off_diagonal;
  j["diagonal_spread"] = r.diagonal_spread;
  j["hermitian_defect"] = r.hermitian_defect;
  if (r.scheme == QuadratureScheme::TensorGauss) j["halving_error"] = r.quad_error;
  if (r.scheme == QuadratureScheme::QuasiMonteCarlo) {
    j["off_diagonal_sigmas"] = r.off_diagonal_sigmas;
    j["diagonal_sigmas"] = r.diagonal_sigmas;
  }
  if (r.kappa_ref) j["kappa"] = *r.kappa_ref;
  j["primary"] = r.primary;
  return j;
}

struct Context {
  InputDocument doc;
  WenMatrix k;
};

InputDocument require_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw Error(ErrorCode::ParseError, "--input is required for '" + cfg.command + "'");
  return load_input(cfg.input);
}

WenDatum datum_of(const InputDocument& doc, const WenMatrix& k) {
  return validate_wen_datum(k, doc.n ? *doc.n : minimal_particle_counts(k));
}

TorusParams tau_of(const InputDocument& doc) { return TorusParams::make(doc.tau ? *doc.tau : cplx(0.0, 1.0)); }

CVector xi_of(const InputDocument& doc, std::size_t g) {
  CVector xi = CVector::Zero(static_cast<Eigen::Index>(g));
  if (!doc.xi) return xi;
  if (doc.xi->size() != g) throw Error(ErrorCode::ShapeMismatch, "xi needs one entry per layer");
  for (std::size_t j = 0; j < g; ++j) xi(static_cast<Eigen::Index>(j)) = (*doc.xi)[j];
  return xi;
}

QuadratureSpec quad_of(const RunConfig& cfg) {
  QuadratureSpec q;
  q.points_per_axis = cfg.points;
  q.total_samples = static_cast<std::size_t>(cfg.samples);
  q.seed = cfg.seed;
  if (cfg.scheme == "tensor") q.scheme = QuadratureScheme::TensorGauss;
  else if (cfg.scheme == "qmc") q.scheme = QuadratureScheme::QuasiMonteCarlo;
  q.validate();
  return q;
}

Json matrix_summary(const WenMatrix& k) {
  Json j;
  j["K"] = to_json(k.K());
  j["g"] = k.g();
  j["delta"] = k.delta();
  j["rho"] = k.rho();
  j["statistic"] = k.statistic() == Statistic::Bosonic ? "bosonic" : "fermionic";
  j["primary"] = k.primary();
  j["u"] = to_json(k.u());
  return j;
}

// ---------------------------------------------------------------------------

void cmd_validate(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  const auto k = validate_wen_matrix(doc.K);
  rep.results = matrix_summary(k);
  if (doc.n) {
    const auto datum = validate_wen_datum(k, *doc.n);
    rep.results["n"] = datum.n_vec();
    rep.results["d"] = datum.d();
  }
  rep.results["valid"] = true;
}

void cmd_invariants(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  const auto k = validate_wen_matrix(doc.K);
  const auto datum = datum_of(doc, k);
  const auto b = restricted_invariants(k);
  const auto pi = pi_group(k);
  rep.results = matrix_summary(k);
  rep.results["adjugate"] = to_json(k.adjugate());
  rep.results["n"] = datum.n_vec();
  rep.results["d"] = datum.d();
  rep.results["pi_invariant_factors"] = pi.invariant_factors();
  rep.results["u_order"] = u_order(k);
  rep.results["q"] = to_string(Rational(datum.n(), datum.d()));
  rep.results["sharp_sector"] = sharp_sector(datum);
  rep.results["rank"] = b.rank;
  rep.results["degree"] = b.degree;
  rep.results["slope"] = b.slope_display();
  rep.results["slope_reduced"] = to_string(b.slope());
  rep.results["stable"] = b.stable;
  rep.results["total_chern"] = to_json(b.total_chern);
  Json c1 = Json::array();
  for (const auto& row : b.c1_coeff) c1.push_back(to_json(row));
  rep.results["c1_coefficients"] = c1;
  if (b.jain_p) {
    rep.results["jain_p"] = *b.jain_p;
    rep.results["jain_fraction"] = to_string(*b.jain_fraction);
  }
  rep.check(make_check("slope times rank is degree", "slope -rho/delta", b.slope() * b.rank == Rational(b.degree) ? 0.0 : 1.0,
                       0.0, true));
  rep.check(make_check("|Pi| = delta", "|K^{-1}Z^g / Z^g| = det K",
                       pi.size() == static_cast<std::size_t>(k.delta()) ? 0.0 : 1.0, 0.0, true));
}

void cmd_theta(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  if (!doc.theta) throw Error(ErrorCode::ParseError, "theta-eval needs a 'theta' object");
  const auto& th = *doc.theta;
  CMatrix om;
  if (th.omega) {
    om = *th.omega;
  } else {
    const auto k = validate_wen_matrix(doc.K);
    const auto tau = tau_of(doc);
    om.resize(static_cast<Eigen::Index>(k.g()), static_cast<Eigen::Index>(k.g()));
    for (std::size_t i = 0; i < k.g(); ++i)
      for (std::size_t j = 0; j < k.g(); ++j)
        om(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = tau.tau * static_cast<double>(k.K()(i, j));
  }
  const auto omega = OmegaMatrix::make(om);
  const std::size_t g = omega.g();
  ThetaCharacteristics chars{th.a.empty() ? std::vector<double>(g, 0.0) : th.a, th.b.empty() ? std::vector<double>(g, 0.0) : th.b};
  if (chars.a.size() != g || chars.b.size() != g || th.z.size() != g)
    throw Error(ErrorCode::ShapeMismatch, "theta a, b and z need " + std::to_string(g) + " entries");
  CVector z(static_cast<Eigen::Index>(g));
  for (std::size_t j = 0; j < g; ++j) z(static_cast<Eigen::Index>(j)) = th.z[j];
  const ThetaEvaluator eval(omega, chars, std::max(cfg.tol, 1e-14));
  const cplx value = eval(z);
  rep.results["g"] = g;
  rep.results["omega"] = to_json(om);
  rep.results["value"] = to_json(value);
  rep.results["truncation_radius"] = eval.plan().radius;
  rep.results["lattice_points"] = lattice_points_visited(eval, z);

  // both quasi-periodicity rules along every coordinate direction at this point
  double unit = 0, shift = 0;
  for (std::size_t j = 0; j < g; ++j) {
    const CVector e = CVector::Unit(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j));
    const cplx u = eval(z + e), expected_u = std::exp(2.0 * kI * kPi * chars.a[j]) * value;
    unit = std::max(unit, std::abs(u - expected_u) / std::max(std::abs(u), std::abs(expected_u)));
    const cplx s = eval(z + om * e);
    const cplx expected_s = std::exp(-2.0 * kI * kPi * (z(static_cast<Eigen::Index>(j)) + chars.b[j]) -
                                     kI * kPi * om(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j))) *
                            value;
    shift = std::max(shift, std::abs(s - expected_s) / std::max(std::abs(s), std::abs(expected_s)));
  }
  rep.check(make_check("unit shift rule", "Riemann theta quasi-periodicity under z -> z + l", unit, 1e-10));
  rep.check(make_check("Omega shift rule", "Riemann theta quasi-periodicity under z -> z + Omega l", shift, 1e-10));
}

void cmd_wf(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  const auto k = validate_wen_matrix(doc.K);
  const auto datum = datum_of(doc, k);
  const auto tau = tau_of(doc);
  const auto spec = WaveFunctionSpec::make(datum, xi_of(doc, k.g()), tau, std::max(cfg.tol, 1e-14));
  Configuration config;
  if (doc.config) {
    config.coords = *doc.config;
  } else {
    std::mt19937_64 rng(cfg.seed);
    config = random_configuration(datum.n_vec(), tau, rng);
  }
  std::vector<PiElement> basis = doc.c ? std::vector<PiElement>{make_pi_element(k, *doc.c)} : spec.pi().elements();
  Json values = Json::array();
  for (const auto& c : basis) {
    Json v;
    Json label = Json::array();
    for (std::size_t i = 0; i < c.size(); ++i) label.push_back(to_string(c.exact(i)));
    v["c"] = label;
    v["value"] = to_json(kvw_wavefunction(spec, c, config));
    values.push_back(v);
  }
  Json coords = Json::array();
  for (const auto& layer : config.coords) {
    Json l = Json::array();
    for (auto z : layer) l.push_back(to_json(z));
    coords.push_back(l);
  }
  rep.results["n"] = datum.n_vec();
  rep.results["d"] = datum.d();
  rep.results["sign_eps"] = spec.sign_eps();
  rep.results["sharp_sector"] = spec.sharp();
  rep.results["config"] = coords;
  rep.results["values"] = values;
  double unit = 0, shift = 0;
  for (const auto& c : basis) {
    const auto r = quasi_periodicity_residual(spec, c, {config});
    unit = std::max(unit, r.unit_shift);
    shift = std::max(shift, r.tau_shift);
  }
  rep.check(make_check("unit shift rule", "many-body wave function: unit shift gives eps", unit, 1e-9));
  rep.check(make_check("tau shift rule", "many-body wave function: tau shift gives eps exp(-2 pi i xi_k) phi^d", shift, 1e-9));
}

Json monomial_json(const MonomialMatrix& m) {
  Json j;
  j["perm"] = m.perm();
  j["phase_exponents"] = m.phase();
  j["order"] = m.order();
  return j;
}

void cmd_heisenberg(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  const auto k = validate_wen_matrix(doc.K);
  const auto datum = datum_of(doc, k);
  const auto r = rep_matrices(datum);
  rep.results["delta"] = r.delta;
  rep.results["basis"] = labels(r.basis);
  rep.results["basis_order"] = r.u_powers ? "powers of u" : "Pi order";
  rep.results["T1"] = monomial_json(r.T1);
  rep.results["T2"] = monomial_json(r.T2);
  rep.results["q"] = to_string(Rational(r.q_exponent, r.delta));
  rep.results["q_primitive"] = r.q_primitive();
  rep.results["sharp_sector"] = r.sharp;
  const bool rel = r.T1.pow(r.delta).is_identity() && r.T2.pow(r.delta).is_identity() &&
                   r.T1 * r.T2 == (r.T2 * r.T1).scaled(r.q_exponent);
  rep.check(make_check("T1, T2 relations", "T1^delta = T2^delta = I and T1 T2 = q T2 T1", rel ? 0.0 : 1.0, 0.0, true));
  rep.check(make_check("q primitive iff primary", "q is a primitive delta-th root of unity iff K is primary",
                       r.q_primitive() == k.primary() ? 0.0 : 1.0, 0.0, true));
  if (k.delta() <= 10) {
    const double norm = irreducibility_norm(k);
    rep.results["character_norm"] = norm;
    rep.check(make_check("|(chi, chi) - 1|", "(chi, chi) = 1 for the standard representation", std::abs(norm - 1.0), 1e-10));
  }
}

void cmd_gram_center(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  const auto k = validate_wen_matrix(doc.K);
  const auto tau = tau_of(doc);
  const auto xi = xi_of(doc, k.g());
  auto q = quad_of(cfg);
  q.tol = 1e-6;
  const auto r = gram_center(k, xi, tau, q);
  rep.results = gram_json(r);
  double dev = 0;
  for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) dev = std::max(dev, std::abs(r.matrix(i, i).real() / *r.kappa_ref - 1.0));
  rep.check(make_check("off-diagonal / mean diagonal", "center-of-mass thetas are orthogonal", r.off_diagonal, 1e-8));
  rep.check(make_check("diagonal spread", "center-of-mass thetas share one norm", r.diagonal_spread, 1e-8));
  rep.check(make_check("diagonal vs closed-form norm", "common norm (2 t)^{-g/2} delta^{-1/2} exp(2 pi t (a, K^{-1} a))", dev, 1e-6));
}

void cmd_gram_manybody(const RunConfig& cfg, Report& rep) {
  const auto doc = require_input(cfg);
  const auto k = validate_wen_matrix(doc.K);
  const auto datum = datum_of(doc, k);
  const auto spec = WaveFunctionSpec::make(datum, xi_of(doc, k.g()), tau_of(doc));
  const auto r = gram_manybody(spec, quad_of(cfg));
  rep.results = gram_json(r);
  rep.results["n"] = datum.n_vec();
  rep.results["sharp_sector"] = spec.sharp();
  const char* anchor = "many-body Gram matrix is a multiple of the identity";
  std::vector<Check> checks;
  if (r.scheme == QuadratureScheme::QuasiMonteCarlo) {
    checks.push_back(make_check("off-diagonal (stderr units)", anchor, r.off_diagonal_sigmas, 3.0));
    checks.push_back(make_check("diagonal differences (stderr units)", anchor, r.diagonal_sigmas, 3.0));
    checks.push_back(make_check("relative deviation", anchor, std::max(r.off_diagonal, r.diagonal_spread), 0.02));
  } else {
    checks.push_back(make_check("relative deviation", anchor, std::max(r.off_diagonal, r.diagonal_spread),
                                std::max(1e-6, 10.0 * r.quad_error), false, "halving error " + format_double(r.quad_error)));
  }
  // scalarness is only claimed for primary K; otherwise the deviation is reported
  for (auto& c : checks) {
    if (!k.primary()) c.verdict = Verdict::Info;
    rep.check(std::move(c));
  }
}

void cmd_verify_all(const RunConfig& cfg, Report& rep) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  opts.points = cfg.points;
  opts.samples = static_cast<std::size_t>(cfg.samples);
  if (!cfg.input.empty()) {
    const auto doc = load_input(cfg.input);
    for (auto& c : verify_datum(doc, opts)) rep.check(std::move(c));
    return;
  }
  Json criteria = Json::array();
  for (int id = 1; id <= kCriterionCount; ++id) {
    const auto r = run_criterion(id, opts);
    criteria.push_back(Json{{"id", r.id}, {"title", r.title}, {"verdict", r.checks_pass() ? "PASS" : "FAIL"}});
    for (auto c : r.checks) {
      c.name = "C" + std::to_string(id) + " " + c.name;
      rep.check(std::move(c));
    }
  }
  rep.results["criteria"] = criteria;
}

// ---------------------------------------------------------------------------

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_double(v.get<double>());
  return v.dump();
}

void print_human(const std::string& command, const Report& rep) {
  std::cout << "kvw " << command << "\n";
  for (auto it = rep.results.begin(); it != rep.results.end(); ++it) std::cout << "  " << it.key() << ": " << scalar_text(it.value()) << "\n";
  for (const auto& c : rep.checks) {
    std::cout << to_string(c.verdict) << " " << c.name << ": " << format_double(c.measured) << " (threshold "
              << format_double(c.threshold) << ") [" << c.anchor << "]";
    if (!c.detail.empty()) std::cout << " " << c.detail;
    std::cout << "\n";
  }
  std::cout << "verdict: " << (rep.pass() ? "PASS" : "FAIL") << "\n";
}

void print_json(const RunConfig& cfg, const Report& rep) {
  Json out;
  out["schema"] = kReportSchema;
  out["command"] = cfg.command;
  out["config"] = Json{{"tol", cfg.tol}, {"points", cfg.points}, {"samples", static_cast<std::size_t>(cfg.samples)}, {"seed", cfg.seed}};
  out["results"] = rep.results;
  Json checks = Json::array();
  for (const auto& c : rep.checks) checks.push_back(to_json(c));
  out["checks"] = checks;
  out["verdict"] = rep.pass() ? "PASS" : "FAIL";
  std::cout << out.dump(2) << "\n";
}

void print_error(const RunConfig& cfg, const std::string& message) {
  if (cfg.format == "json") {
    Json out;
    out["schema"] = kReportSchema;
    out["command"] = cfg.command;
    out["error"] = message;
    out["verdict"] = "INPUT_ERROR";
    std::cout << out.dump(2) << "\n";
  }
  std::cerr << "error: " << message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-layer quantum Hall torus toolkit"};
  app.require_subcommand(1, 1);
  RunConfig cfg;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"validate", "check the Wen axioms for K (and K n = d e when n is given)"},
      {"invariants", "exact invariants of K and of its restricted bundle"},
      {"theta-eval", "evaluate a theta function with characteristics"},
      {"wf-eval", "evaluate the many-body basis at a configuration"},
      {"heisenberg", "magnetic translation matrices and their relations"},
      {"gram-center", "Gram matrix of the center-of-mass basis"},
      {"gram-manybody", "Gram matrix of the many-body basis"},
      {"verify-all", "acceptance suite, or the checks for one input document"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input", cfg.input, "input document (JSON or plain integer matrix)");
    sub->add_option("--tol", cfg.tol, "evaluation tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--points", cfg.points, "Gauss-Legendre points per axis")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "QMC sample count")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "seed for random configurations and QMC shifts");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"human", "json"}));
    if (name == "gram-manybody") sub->add_option("--scheme", cfg.scheme, "quadrature")->check(CLI::IsMember({"auto", "tensor", "qmc"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Report rep;
  try {
    if (cfg.command == "validate") cmd_validate(cfg, rep);
    else if (cfg.command == "invariants") cmd_invariants(cfg, rep);
    else if (cfg.command == "theta-eval") cmd_theta(cfg, rep);
    else if (cfg.command == "wf-eval") cmd_wf(cfg, rep);
    else if (cfg.command == "heisenberg") cmd_heisenberg(cfg, rep);
    else if (cfg.command == "gram-center") cmd_gram_center(cfg, rep);
    else if (cfg.command == "gram-manybody") cmd_gram_manybody(cfg, rep);
    else cmd_verify_all(cfg, rep);
  } catch (const Error& e) {
    print_error(cfg, e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    print_error(cfg, e.what());
    return 2;
  }
  if (cfg.format == "json") print_json(cfg, rep);
  else print_human(cfg.command, rep);
  return rep.pass() ? 0 : 1;
}
