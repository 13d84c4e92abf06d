#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncerg/actions.hpp"
#include "ncerg/error.hpp"
#include "ncerg/io.hpp"

namespace ncerg::cli {

namespace {

using io::Json;

struct Options {
  double atol = 1e-10;
  double rank_tol = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "text";
  std::size_t dim_cap = kDefaultDimensionCap;

  Tolerance tol() const { return {atol, rank_tol}; }
};

struct Report {
  Json data = Json::object();
  std::vector<std::string> text;
  int exit_code = 0;

  void line(std::string s) { text.push_back(std::move(s)); }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string entry(Complex z) {
  const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
  if (im == 0.0) return num(re);
  if (re == 0.0) return num(im) + "i";
  return num(re) + (im < 0 ? "-" : "+") + num(std::abs(im)) + "i";
}

void add_matrix(Report& r, const std::string& indent, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string row = indent + "[";
    for (std::size_t j = 0; j < m.cols(); ++j) row += (j ? " " : "") + entry(m(i, j));
    r.line(row + "]");
  }
}

Json optional_matrix(const std::optional<Matrix>& m) { return m ? io::matrix_to_json(*m) : Json(nullptr); }

// ---- shared analyses ----

void analyze_into(Report& r, Json& out, const OperatorAlgebra& a, const Options& o) {
  const auto cd = center_and_blocks(a, o.tol(), o.seed);
  const auto types = murray_von_neumann_type(a, o.tol());
  out["ambient_dim"] = a.ambient_dim();
  out["algebra_dim"] = a.dim();
  out["center_dim"] = cd.center_dim;
  Json blocks = Json::array();
  std::string summary;
  for (const auto& f : types.factors) {
    blocks.push_back({{"size", f.size}, {"multiplicity", f.multiplicity}, {"type", factor_type_label(f)}});
    summary += (summary.empty() ? "" : " + ") + factor_type_label(f) + " x" + std::to_string(f.multiplicity);
  }
  out["blocks"] = blocks;
  out["type_iii"] = types.has_type_iii;
  out["trace_faithful"] = types.trace.faithful();
  r.line("algebra: dim " + std::to_string(a.dim()) + " on C^" + std::to_string(a.ambient_dim()) + ", center dim " +
         std::to_string(cd.center_dim));
  r.line("blocks: " + summary);
  r.line("type III: " + yes_no(types.has_type_iii) + " (faithful finite trace: " + yes_no(types.trace.faithful()) + ")");
}

void ergodic_action_into(Report& r, Json& out, const AutomorphicAction& act, const Options& o) {
  const auto e = is_ergodic_action(act, o.tol());
  out = {{"ergodic", e.ergodic}, {"fixed_dim", e.fixed_dim}, {"witness", optional_matrix(e.witness)}};
  r.line("action ergodic: " + yes_no(e.ergodic) + " (fixed-point algebra dim " + std::to_string(e.fixed_dim) + ")");
  if (e.witness) {
    r.line("  invariant projection:");
    add_matrix(r, "    ", *e.witness);
  }
}

void ergodic_state_into(Report& r, Json& out, const StateFunctional& f, const AutomorphicAction& act,
                        const Options& o) {
  const auto e = is_ergodic_state(f, act, o.tol());
  out = {{"ergodic", e.ergodic},
         {"support", io::matrix_to_json(e.support)},
         {"gns_dim", e.gns_dim},
         {"commutant_dim", e.commutant_dim},
         {"split", nullptr}};
  r.line("state ergodic: " + yes_no(e.ergodic) + " (GNS dim " + std::to_string(e.gns_dim) + ", covariant commutant dim " +
         std::to_string(e.commutant_dim) + ")");
  if (e.split) {
    out["split"] = {{"lambda", e.split->lambda},
                    {"part", io::matrix_to_json(e.split->part.density())},
                    {"complement", io::matrix_to_json(e.split->complement.density())}};
    r.line("  f = " + num(e.split->lambda) + " f_E + " + num(1.0 - e.split->lambda) + " f_(I-E)");
  }
}

void t_type_into(Report& r, Json& out, const AutomorphicAction& act, const Options& o) {
  const auto t = classify_t_type(act, o.tol());
  out = {{"label", t.label},
         {"conventional_label", t.conventional_label},
         {"trace_weights", t.certificate.trace.weights},
         {"gap", t.certificate.gap}};
  r.line("T-type: " + t.label + " (" + t.conventional_label + ")");
}

// Γ spot checks and the type consistency report; returns whether all pass.
bool crossed_into(Report& r, Json& out, const AutomorphicAction& act, const Options& o) {
  const Tolerance tol = o.tol();
  const auto cp = build_crossed_product(act, o.dim_cap, tol);
  const auto types = murray_von_neumann_type(cp.algebra, tol);
  out["space_dim"] = cp.space_dim;
  out["algebra_dim"] = cp.algebra.dim();
  Json blocks = Json::array();
  for (const auto& f : types.factors)
    blocks.push_back({{"size", f.size}, {"multiplicity", f.multiplicity}, {"type", factor_type_label(f)}});
  out["blocks"] = blocks;
  r.line("crossed product: dim " + std::to_string(cp.algebra.dim()) + " on C^" + std::to_string(cp.space_dim) + ", " +
         std::to_string(types.factors.size()) + " central blocks");

  double gamma_phi = 0.0, gamma_shift = 0.0, min_eig = 0.0, fourier = 0.0;
  const auto& basis = act.algebra().basis();
  for (const auto& b : basis) {
    gamma_phi = std::max(gamma_phi, max_abs_diff(gamma_expectation(cp, cp.embed(b), tol), b));
    for (std::size_t h = 1; h < cp.shift_unitaries.size(); ++h)
      gamma_shift = std::max(gamma_shift, max_abs(gamma_expectation(cp, cp.shift_unitaries[h] * cp.embed(b), tol)));
  }
  Rng rng(o.seed);
  bool fourier_ok = true;
  for (int t = 0; t < 20; ++t) {
    Vector c(cp.algebra.dim());
    for (auto& x : c) x = rng.complex_normal();
    const Matrix el = cp.algebra.combine(c);
    const auto eig = hermitian_eigendecomposition(hermitian_part(gamma_expectation(cp, el.adjoint() * el, tol)), tol);
    min_eig = t == 0 ? eig.values.front() : std::min(min_eig, eig.values.front());
    const double res = fourier_residual(cp, el);
    fourier = std::max(fourier, res);
    fourier_ok = fourier_ok && res <= tol.atol * (1.0 + max_abs(el));
  }
  const bool gamma_ok = gamma_phi <= tol.atol && gamma_shift <= tol.atol && min_eig >= -tol.atol && fourier_ok;
  out["gamma"] = {{"inverse_of_embedding_residual", gamma_phi},
                  {"off_identity_residual", gamma_shift},
                  {"min_eigenvalue_on_psd_samples", min_eig},
                  {"fourier_residual", fourier},
                  {"passed", gamma_ok}};
  r.line("conditional expectation: " + std::string(gamma_ok ? "PASS" : "FAIL") + " (|G(F(A)) - A| " + num(gamma_phi) +
         ", |G(U_h F(A))| " + num(gamma_shift) + ", min eig " + num(min_eig) + ", Fourier residual " + num(fourier) +
         ")");

  const auto t5 = type_consistency(act, o.dim_cap, tol);
  out["type_consistency"] = {{"consistent", t5.consistent},
                             {"t_type", t5.t_type.label},
                             {"t_type_conventional", t5.t_type.conventional_label},
                             {"crossed_type_iii", t5.crossed_type.has_type_iii},
                             {"embedded_identity_finite", t5.embedded_identity.finite},
                             {"embedded_identity_gap", t5.embedded_identity.gap}};
  r.line("type consistency: " + std::string(t5.consistent ? "PASS" : "FAIL") + " (" + t5.t_type.label +
         "; crossed product has no type III; embedded identity finite: " + yes_no(t5.embedded_identity.finite) + ")");
  return gamma_ok && t5.consistent;
}

// ---- verify suite ----

struct Check {
  std::string name;
  std::string status;  // PASS, FAIL, SKIP
  std::string detail;
};

std::vector<Check> verify_suite(const AutomorphicAction& act, const Options& o) {
  const Tolerance tol = o.tol();
  const OperatorAlgebra& a = act.algebra();
  const std::size_t n = a.ambient_dim();
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, const std::function<Check()>& body) {
    try {
      checks.push_back(body());
    } catch (const Error& e) {
      checks.push_back({name, "FAIL", std::string(code_name(e.code())) + ": " + e.what()});
    }
    checks.back().name = name;
  };
  auto verdict = [](bool ok, std::string detail) { return Check{"", ok ? "PASS" : "FAIL", std::move(detail)}; };

  Rng rng(o.seed);
  Matrix m(n, n);
  for (auto& z : m.entries()) z = rng.complex_normal();
  Matrix rho = m * m.adjoint() + Matrix::identity(n) * Complex(0.1);
  rho *= Complex(1.0 / rho.trace().real());
  const StateFunctional f(a, hermitian_part(rho), tol);
  std::optional<GnsData> g;

  guarded("gns.soundness", [&] {
    g = gns_construct(f, tol);
    const double budget = 100.0 * tol.atol * std::max(1.0, g->condition * g->condition);
    double value = 0.0, hom = 0.0;
    const auto& basis = a.basis();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Matrix& pa = g->rep_basis[i];
      value = std::max(value, std::abs(f(basis[i]) - dot(g->cyclic_vector, pa * std::span<const Complex>(g->cyclic_vector))));
      hom = std::max(hom, max_abs_diff(g->pi(basis[i].adjoint()), pa.adjoint()));
      for (std::size_t j = 0; j < basis.size(); ++j)
        hom = std::max(hom, max_abs_diff(g->pi(basis[i] * basis[j]), pa * g->rep_basis[j]));
    }
    return verdict(value <= budget && hom <= budget,
                   "state residual " + num(value) + ", homomorphism residual " + num(hom) + ", budget " + num(budget));
  });

  guarded("modular.tomita", [&] {
    if (!g) g = gns_construct(f, tol);
    const auto md = modular_data(*g, tol);
    const double budget = 100.0 * tol.atol * std::max(1.0, g->condition * g->condition);
    const double polar = max_abs_diff(md.s_conj, md.j_conj * md.delta_half.conj());
    double comm = 0.0;
    for (const auto& x : g->rep_basis) {
      const Matrix jx = md.conjugate_by_j(x);
      for (const auto& y : g->rep_basis) comm = std::max(comm, max_abs(commutator(jx, y)));
    }
    return verdict(polar <= budget && comm <= budget,
                   "polar residual " + num(polar) + ", commutant residual " + num(comm));
  });

  std::optional<StateFunctional> inv;
  guarded("invariant_state", [&] {
    inv = act.is_finite() ? average_state(f, act) : invariant_state_for_automorphism(f, act, tol);
    const bool ok = inv->is_invariant(act, tol) && inv->is_faithful(tol);
    return verdict(ok, std::string(act.is_finite() ? "group average" : "mean-ergodic average") +
                           " of a faithful state is invariant and faithful");
  });

  guarded("wandering.weak_null_none", [&] {
    // Orthogonal orbit families may exist; orbits never tend weakly to zero.
    const auto w = wandering_projection_search(act, {4, 32, o.seed}, tol);
    std::vector<Matrix> candidates;
    if (w) candidates.push_back(w->projection);
    const auto cd = center_and_blocks(a, tol, o.seed);
    Rng prng(o.seed);
    for (const auto& mp : minimal_projection_decomposition(a, cd, Matrix::identity(n), prng, tol))
      candidates.push_back(mp.projection);
    bool ok = true;
    for (const auto& e : candidates) ok = ok && !has_weakly_null_orbit(act, e, 8, tol);
    return verdict(ok, std::string("no weakly null orbit among ") + std::to_string(candidates.size()) +
                           " projections; orthogonal orbit family " + (w ? "present" : "absent"));
  });

  guarded("ergodicity.coherence", [&] {
    if (!inv) throw Error(ErrorCode::Internal, "no invariant state");
    const auto ea = is_ergodic_action(act, tol);
    const auto es = is_ergodic_state(*inv, act, tol);
    bool ok = ea.ergodic == es.ergodic;
    double recon = 0.0;
    if (es.split) {
      const auto& s = *es.split;
      ok = ok && s.part.is_invariant(act, tol) && s.complement.is_invariant(act, tol);
      const Vector vp = s.part.basis_values(), vc = s.complement.basis_values(), vf = inv->basis_values();
      for (std::size_t i = 0; i < vf.size(); ++i)
        recon = std::max(recon, std::abs(s.lambda * vp[i] + (1.0 - s.lambda) * vc[i] - vf[i]));
      ok = ok && recon <= 1e3 * tol.atol;
    }
    return verdict(ok, "action ergodic: " + yes_no(ea.ergodic) + ", faithful invariant state ergodic: " +
                           yes_no(es.ergodic) + (es.split ? ", split residual " + num(recon) : ""));
  });

  if (!act.is_finite()) {
    for (const char* name : {"t_type.finite", "t_equivalence.minimal", "crossed.expectation"})
      checks.push_back({name, "SKIP", "needs a finite group"});
    return checks;
  }

  guarded("t_type.finite", [&] {
    const auto t = classify_t_type(act, tol);
    double drift = 0.0, tracial = 0.0;
    for (const auto& b : a.basis()) {
      for (std::size_t k = 0; k < act.count(); ++k)
        drift = std::max(drift, std::abs(t.certificate.trace(act.apply(k, b)) - t.certificate.trace(b)));
      for (const auto& c : a.basis())
        tracial = std::max(tracial, std::abs(t.certificate.trace(b * c) - t.certificate.trace(c * b)));
    }
    const bool ok = t.type != TType::PurelyInfinite && t.certificate.trace.faithful() && drift <= 1e3 * tol.atol &&
                    tracial <= 1e3 * tol.atol;
    return verdict(ok, t.label + ", invariance residual " + num(drift) + ", trace residual " + num(tracial));
  });

  guarded("t_equivalence.minimal", [&] {
    const auto cd = center_and_blocks(a, tol, o.seed);
    Rng prng(o.seed);
    const auto mins = minimal_projection_decomposition(a, cd, Matrix::identity(n), prng, tol);
    std::size_t pairs = 0, equivalent = 0;
    bool ok = true;
    for (std::size_t i = 0; i < mins.size() && pairs < 64; ++i)
      for (std::size_t j = 0; j < mins.size() && pairs < 64; ++j, ++pairs) {
        const Matrix& e = mins[i].projection;
        const Matrix& q = mins[j].projection;
        const auto w = t_equivalent(e, q, act, tol, o.seed);
        ok = ok && w.has_value() == orbit_trace_criterion(e, q, act, tol, o.seed);
        if (w) {
          ++equivalent;
          ok = ok && verify_twist_witness(e, q, *w, act, tol);
        }
        if (mvn_equivalent(a, e, q, tol, o.seed).equivalent) ok = ok && w.has_value();
      }
    return verdict(ok, std::to_string(equivalent) + " of " + std::to_string(pairs) +
                           " minimal-projection pairs T-equivalent; all witnesses verified");
  });

  if (n * act.count() > o.dim_cap) {
    checks.push_back({"crossed.expectation", "SKIP", "crossed product above the dimension cap"});
  } else {
    guarded("crossed.expectation", [&] {
      Report scratch;
      Json out;
      const bool ok = crossed_into(scratch, out, act, o);
      return verdict(ok, "conditional expectation and type consistency");
    });
  }
  return checks;
}

void verify_into(Report& r, const AutomorphicAction& act, const Options& o) {
  const auto checks = verify_suite(act, o);
  Json arr = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name}, {"status", c.status}, {"detail", c.detail}});
    all = all && c.status != "FAIL";
    r.line(c.status + " " + c.name + ": " + c.detail);
  }
  r.data["checks"] = arr;
  r.data["passed"] = all;
  r.line(all ? "all checks passed" : "verification FAILED");
  if (!all) r.exit_code = 1;
}

struct ScenarioSystem {
  SectionsAlgebra sections;
  AutomorphicAction action;
};

ScenarioSystem load_scenario(const std::string& path, const Options& o) {
  const auto sc = io::scenario_from_json(io::read_json_file(path));
  auto sa = build_sections_algebra(sc.patch, sc.fibre, o.dim_cap);
  auto act = translation_action(sa, sc.fibre, o.tol());
  return {std::move(sa), std::move(act)};
}

int exit_code_for(ErrorCode c) { return c == ErrorCode::Internal ? 1 : 2; }

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ergodic theory of finite-dimensional operator algebras under group actions", "ncerg"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--atol", o.atol, "Absolute tolerance for residual checks")->capture_default_str();
  app.add_option("--rank-tol", o.rank_tol, "Tolerance for rank and support decisions")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for every randomized step")->capture_default_str();
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--dim-cap", o.dim_cap, "Largest crossed-product or lattice space dimension")->capture_default_str();

  std::string algebra_path, action_path, state_path, pair_path, crossed_path, scenario_path, dyn_path, then = "summary";
  auto* analyze = app.add_subcommand("analyze", "Center, central blocks and factor types of an algebra");
  analyze->add_option("--algebra", algebra_path, "AlgebraSpec JSON")->required();

  auto* inv = app.add_subcommand("invariant-states", "Averaged and mean-ergodic invariant states");
  inv->add_option("--algebra", algebra_path, "AlgebraSpec JSON")->required();
  inv->add_option("--action", action_path, "ActionSpec JSON")->required();
  inv->add_option("--state", state_path, "StateSpec JSON")->required();

  auto* erg = app.add_subcommand("ergodic-check", "Ergodicity of an action, an invariant state, or a classical map");
  erg->add_option("--algebra", algebra_path, "AlgebraSpec JSON");
  erg->add_option("--action", action_path, "ActionSpec JSON");
  erg->add_option("--state", state_path, "StateSpec JSON of an invariant state");
  erg->add_option("--dyn", dyn_path, "DynSpec JSON");

  auto* equiv = app.add_subcommand("equiv", "Murray-von Neumann and T-twisted equivalence of two projections");
  equiv->add_option("--algebra", algebra_path, "AlgebraSpec JSON")->required();
  equiv->add_option("--action", action_path, "ActionSpec JSON")->required();
  equiv->add_option("--pair", pair_path, "JSON with projections \"e\" and \"f\"")->required();

  auto* crossed = app.add_subcommand("crossed", "Crossed product, conditional expectation and type consistency");
  crossed->add_option("--crossed", crossed_path, "CrossedSpec JSON")->required();

  auto* scenario = app.add_subcommand("scenario", "Lattice sections algebra with translations");
  scenario->add_option("--scenario", scenario_path, "ScenarioSpec JSON")->required();
  scenario->add_option("--then", then, "Analysis to run on the scenario")
      ->check(CLI::IsMember({"summary", "analyze", "ergodic-check", "crossed", "verify"}))
      ->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Property suite on an action; exit 0 iff every check passes");
  verify->add_option("--scenario", scenario_path, "ScenarioSpec JSON");
  verify->add_option("--algebra", algebra_path, "AlgebraSpec JSON");
  verify->add_option("--action", action_path, "ActionSpec JSON");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (o.format == "json") {
      Json j{{"schema", 1}, {"error", {{"code", std::string(code_name(ErrorCode::Parse))}, {"message", e.what()}}}};
      out << j.dump(2) << "\n";
    } else {
      err << "error [" << code_name(ErrorCode::Parse) << "]: " << e.what() << "\n";
    }
    return 2;
  }

  Report r;
  const std::string command = app.get_subcommands().front()->get_name();
  r.data["schema"] = 1;
  r.data["command"] = command;
  try {
    const Tolerance tol = o.tol();
    tol.validate();
    auto load_algebra = [&] { return io::algebra_from_json(io::read_json_file(algebra_path), tol); };
    auto load_action = [&](const OperatorAlgebra& a) {
      return io::action_from_json(io::read_json_file(action_path), a, tol);
    };
    auto need = [](bool ok, const char* what) {
      if (!ok) throw Error(ErrorCode::Parse, what);
    };

    if (command == "analyze") {
      Json a;
      analyze_into(r, a, load_algebra(), o);
      r.data["algebra"] = a;
    } else if (command == "invariant-states") {
      const auto a = load_algebra();
      const auto act = load_action(a);
      const auto f = io::state_from_json(io::read_json_file(state_path), a, tol);
      auto describe = [&](const char* key, const char* title, const StateFunctional& s) {
        r.data[key] = {{"density", io::matrix_to_json(s.density())},
                       {"faithful", s.is_faithful(tol)},
                       {"invariant", s.is_invariant(act, tol)}};
        r.line(std::string(title) + ": faithful " + yes_no(s.is_faithful(tol)) + ", invariant " +
               yes_no(s.is_invariant(act, tol)));
        add_matrix(r, "  ", s.density());
      };
      r.data["input_faithful"] = f.is_faithful(tol);
      r.data["averaged"] = nullptr;
      r.data["mean_ergodic"] = nullptr;
      if (act.is_finite()) describe("averaged", "group average", average_state(f, act));
      if (!act.is_finite()) {
        describe("mean_ergodic", "mean-ergodic average", invariant_state_for_automorphism(f, act, tol));
      } else if (act.group().generators().size() == 1) {
        const auto z = AutomorphicAction::from_automorphism(a, act.unitaries()[act.group().generators()[0]], tol);
        describe("mean_ergodic", "mean-ergodic average of the generator", invariant_state_for_automorphism(f, z, tol));
      }
    } else if (command == "ergodic-check") {
      if (!dyn_path.empty()) {
        const auto sys = io::dyn_from_json(io::read_json_file(dyn_path));
        if (const auto* p = std::get_if<io::PermutationSystem>(&sys)) {
          const auto e = is_ergodic_transformation(p->map, p->measure);
          const auto x = is_extreme_invariant_measure(p->measure, p->map);
          r.data["classical"] = {{"ergodic", e.ergodic},
                                 {"witness", e.witness ? Json(*e.witness) : Json(nullptr)},
                                 {"extreme", x.extreme},
                                 {"cycles", p->map.cycles()}};
          r.line("classical map ergodic: " + yes_no(e.ergodic) + "; extreme invariant measure: " + yes_no(x.extreme));
        } else {
          const auto& s = std::get<io::ShiftSystem>(sys);
          const auto w = wandering_set_search(IntegerShift{}, s.set, 4);
          r.data["classical"] = {{"wandering", w.has_value()},
                                 {"exponents", w ? Json(w->exponents) : Json(nullptr)},
                                 {"images", w ? Json(w->images) : Json(nullptr)}};
          r.line("shift on Z: wandering set " + yes_no(w.has_value()));
        }
      } else {
        need(!algebra_path.empty() && !action_path.empty(), "ergodic-check needs --algebra and --action, or --dyn");
        const auto a = load_algebra();
        const auto act = load_action(a);
        Json ja;
        ergodic_action_into(r, ja, act, o);
        r.data["action"] = ja;
        r.data["state"] = nullptr;
        if (!state_path.empty()) {
          Json js;
          ergodic_state_into(r, js, io::state_from_json(io::read_json_file(state_path), a, tol), act, o);
          r.data["state"] = js;
        }
      }
    } else if (command == "equiv") {
      const auto a = load_algebra();
      const auto act = load_action(a);
      const auto pair = io::pair_from_json(io::read_json_file(pair_path));
      const auto mvn = mvn_equivalent(a, pair.e, pair.f, tol, o.seed);
      const auto tw = t_equivalent(pair.e, pair.f, act, tol, o.seed);
      bool verified = true;
      if (mvn.witness) {
        const Matrix& v = *mvn.witness;
        verified = verified && max_abs_diff(v.adjoint() * v, pair.e) <= tol.atol &&
                   max_abs_diff(v * v.adjoint(), pair.f) <= tol.atol && contains(a, v, tol);
      }
      if (tw) verified = verified && verify_twist_witness(pair.e, pair.f, *tw, act, tol);
      r.data["mvn"] = {{"equivalent", mvn.equivalent}, {"witness", optional_matrix(mvn.witness)}};
      r.data["t_equivalent"] = {{"equivalent", tw.has_value()},
                                {"witness", tw ? io::witness_to_json(*tw, act) : Json(nullptr)}};
      r.data["witnesses_verified"] = verified;
      r.line("MvN: " + yes_no(mvn.equivalent) + "; T-equivalent: " + yes_no(tw.has_value()));
      if (tw) {
        for (const auto& [g, m] : *tw) {
          r.line("  A[" + act.label(g) + "] =");
          add_matrix(r, "    ", m);
        }
      }
      if (!verified) {
        r.line("witness re-verification FAILED");
        r.exit_code = 1;
      }
    } else if (command == "crossed") {
      const auto act = io::crossed_from_json(io::read_json_file(crossed_path), tol);
      Json c;
      if (!crossed_into(r, c, act, o)) r.exit_code = 1;
      r.data["crossed"] = c;
    } else if (command == "scenario") {
      const auto sys = load_scenario(scenario_path, o);
      r.data["lattice"] = sys.sections.patch.orders;
      r.data["fibre_dim"] = sys.sections.fibre_dim;
      r.line("lattice " + Json(sys.sections.patch.orders).dump() + ", fibre M_" + std::to_string(sys.sections.fibre_dim));
      if (then == "verify") {
        verify_into(r, sys.action, o);
      } else {
        if (then == "summary" || then == "analyze") {
          Json a;
          analyze_into(r, a, sys.sections.algebra, o);
          r.data["algebra"] = a;
        }
        if (then == "summary" || then == "ergodic-check") {
          Json e, t;
          ergodic_action_into(r, e, sys.action, o);
          t_type_into(r, t, sys.action, o);
          r.data["action"] = e;
          r.data["t_type"] = t;
        }
        if (then == "summary" || then == "crossed") {
          Json c;
          if (!crossed_into(r, c, sys.action, o)) r.exit_code = 1;
          r.data["crossed"] = c;
        }
      }
    } else if (command == "verify") {
      if (!scenario_path.empty()) {
        const auto sys = load_scenario(scenario_path, o);
        verify_into(r, sys.action, o);
      } else {
        need(!algebra_path.empty() && !action_path.empty(), "verify needs --scenario, or --algebra and --action");
        const auto a = load_algebra();
        verify_into(r, load_action(a), o);
      }
    }
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    if (o.format == "json") {
      Json j{{"schema", 1},
             {"command", command},
             {"error", {{"code", std::string(code_name(e.code()))}, {"message", e.what()}}}};
      out << j.dump(2) << "\n";
    } else {
      err << "error [" << code_name(e.code()) << "]: " << e.what() << "\n";
    }
    return code;
  }

  if (o.format == "json") {
    r.data["exit_code"] = r.exit_code;
    out << r.data.dump(2) << "\n";
  } else {
    for (const auto& l : r.text) out << l << "\n";
  }
  return r.exit_code;
}

}  // namespace ncerg::cli
