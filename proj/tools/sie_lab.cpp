#include <omp.h>

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "problem_file.hpp"
#include "sie/dominant.hpp"
#include "sie/harness.hpp"
#include "sie/report.hpp"

using namespace sie;
using nlohmann::json;

namespace {

struct Common {
  int n = 16;
  std::string scheme;
  double eta = -1.0;
  std::string problem;
  std::string out = "-";
  std::string format = "json";
  std::uint64_t seed = 7;
  int threads = 0;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--n", c.n, "discretization size")->check(CLI::PositiveNumber);
  sub->add_option("--scheme", c.scheme, "scheme name");
  sub->add_option("--eta", c.eta, "weak-kernel exponent in [0, 1)");
  sub->add_option("--problem", c.problem, "problem file (JSON)");
  sub->add_option("--out", c.out, "output file, - for stdout");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", c.seed, "noise seed");
  sub->add_option("--threads", c.threads, "OpenMP threads (0 keeps the default)");
}

json problem_doc(const Common& c, const std::string& kind) {
  return c.problem.empty() ? cli::default_problem(kind) : cli::load_problem(c.problem);
}

std::string emit_solve(const SolveReport& r, const Common& c, json extra = json::object()) {
  const Format f = format_from_string(c.format);
  if (f == Format::csv) return to_csv(r);
  json j = to_json(r);
  for (auto& [k, v] : extra.items()) j[k] = v;
  return j.dump(2) + "\n";
}

json newton_json(const NewtonReport& r) {
  return {{"eta0", r.eta0}, {"B0", r.B0}, {"lipschitz", r.lipschitz}, {"h", r.h},
          {"kantorovich_ok", r.kantorovich_ok}, {"residuals", r.residuals}, {"iterations", r.iterations},
          {"converged", r.converged}};
}

std::vector<double> parse_pair(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() != 2) fail(ErrorKind::invalid_input, "expected two comma-separated values: " + s);
  return v;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::tuning: return 2;
    case ErrorKind::singular:
    case ErrorKind::divergence:
    case ErrorKind::cubature: return 3;
    case ErrorKind::invalid_input:
    case ErrorKind::domain: return 4;
  }
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sie-lab: discrete schemes for singular integral equations"};
  app.require_subcommand(1);
  Common c;
  std::string text;
  std::function<std::string()> run;

  auto* circle = app.add_subcommand("solve-circle", "collocation on the unit circle");
  add_common(circle, c);
  circle->callback([&] {
    run = [&] {
      CircleProblem p = cli::circle_problem(problem_doc(c, "circle"));
      if (c.eta >= 0) p.weak.eta = c.eta;
      const CircleScheme s = circle_scheme_from_string(c.scheme.empty() ? "optimal" : c.scheme);
      return emit_solve(solve(p, c.n, s).report, c);
    };
  });

  auto* dominant = app.add_subcommand("solve-dominant", "dominant equation on [-1, 1]");
  add_common(dominant, c);
  dominant->callback([&] {
    run = [&] {
      const SegmentDominantProblem p = cli::dominant_problem(problem_doc(c, "dominant"));
      const WeightedSolution sol = solve_dominant(p, c.n);
      SolveReport r;
      r.scheme = p.xi == SegmentIndex::zero ? "index0" : "index1";
      r.n = c.n;
      json nodes = json::array();
      for (double t : sol.nodes) {
        const cplx x = eval(sol, t);
        r.solution_norm = std::max(r.solution_norm, std::abs(x));
        nodes.push_back({t, x.real(), x.imag()});
      }
      return emit_solve(r, c, {{"nodal", nodes}});
    };
  });

  int spline_r = 1;
  double spline_M = 0.0;
  auto* spline = app.add_subcommand("solve-spline", "spline collocation on [-1, 1]");
  add_common(spline, c);
  spline->add_option("--r", spline_r, "spline degree")->check(CLI::Range(1, 3));
  spline->add_option("--M", spline_M, "dominance margin target");
  spline->callback([&] {
    run = [&] {
      const SegmentProblem p = cli::segment_problem(problem_doc(c, "spline"));
      const MeshParams mp = tune_params(p, c.n, spline_r, spline_M);
      return emit_solve(solve_linear(p, mp).report, c, {{"q", mp.q}, {"h_star", mp.h_star}});
    };
  });

  double ex_h = 0.0, ex_A = 8.0;
  auto* exc = app.add_subcommand("solve-exceptional", "shifted-node schemes for the exceptional case");
  add_common(exc, c);
  exc->add_option("--offset", ex_h, "node offset (0 searches)");
  exc->add_option("--A", ex_A, "truncation half-width for the line");
  exc->callback([&] {
    run = [&] {
      const json doc = problem_doc(c, "exceptional");
      const ExceptionalProblem p = cli::exceptional_problem(doc);
      const std::string g = doc.value("geometry", std::string("circle"));
      ExceptionalSolution sol;
      if (g == "circle") {
        sol = solve_circle_exceptional(p, c.n, ex_h);
      } else if (g == "segment") {
        sol = solve_segment_exceptional(p, c.n, ex_h);
      } else {
        LineOptions o;
        o.A = ex_A;
        o.N = c.n;
        o.h = ex_h;
        sol = solve_line_truncated(p, o);
      }
      return emit_solve(sol.report, c, {{"geometry", g}, {"tail", sol.tail}});
    };
  });

  std::string newton_mode = "basic";
  auto* nonlin = app.add_subcommand("solve-nonlinear", "nonlinear equations on the unit circle");
  add_common(nonlin, c);
  nonlin->add_option("--newton", newton_mode, "basic or modified")->check(CLI::IsMember({"basic", "modified"}));
  nonlin->callback([&] {
    run = [&] {
      const NonlinearCircleProblem p = cli::nonlinear_problem(problem_doc(c, "nonlinear"));
      const NonlinearScheme s = nonlinear_scheme_from_string(c.scheme.empty() ? "scheme1" : c.scheme);
      NewtonConfig cfg;
      cfg.mode = newton_mode == "basic" ? NewtonMode::basic : NewtonMode::modified;
      cfg.seed = c.seed;
      const NonlinearCircleSolution sol = solve_nonlinear_circle(p, c.n, s, cfg);
      if (!sol.newton.converged) fail(ErrorKind::divergence, "Newton iteration did not converge");
      SolveReport r;
      r.scheme = to_string(s);
      r.n = c.n;
      r.residual = sol.newton.residuals.empty() ? 0.0 : sol.newton.residuals.back();
      r.solution_norm = grid_norm([&](double t) { return sol.x(t); }, NormKind::holder_grid);
      return emit_solve(r, c, {{"newton", newton_json(sol.newton)}});
    };
  });

  auto* bis = app.add_subcommand("solve-bisingular", "bisingular equations on the torus");
  add_common(bis, c);
  bis->callback([&] {
    run = [&] {
      const json doc = problem_doc(c, "bisingular");
      const std::string method = c.scheme.empty() ? "collocation" : c.scheme;
      if (method == "collocation") {
        const BisingularSolution sol = solve_collocation(cli::bisingular_problem(doc), c.n);
        return emit_solve(sol.report, c,
                          {{"kappa", {sol.factor.kappa1, sol.factor.kappa2}}, {"factor_residual", sol.factor.residual}});
      }
      if (method == "iterate") {
        IterationConfig cfg;
        cfg.n = c.n;
        const IterationResult it = riemann_iterate(cli::bisingular_problem(doc), cfg);
        SolveReport r;
        r.scheme = "iterate";
        r.n = c.n;
        r.solution_norm = it.nodal.cwiseAbs().maxCoeff();
        r.parameter = it.q;
        return emit_solve(r, c, {{"iterations", it.iterations}, {"q", it.q}, {"history", it.history}});
      }
      if (method == "four-term") {
        FourTermConfig cfg;
        cfg.n = c.n;
        const FourTermResult it = four_term_iterate(cli::four_term_problem(doc), cfg);
        SolveReport r;
        r.scheme = "four-term";
        r.n = c.n;
        r.solution_norm = it.nodal.cwiseAbs().maxCoeff();
        return emit_solve(r, c, {{"iterations", it.iterations}, {"q", it.q}});
      }
      fail(ErrorKind::invalid_input, "bisingular scheme must be collocation, iterate or four-term");
    };
  });

  std::string shift;
  int md_r = 0, blocks = 0;
  auto* md = app.add_subcommand("solve-multidim", "two-dimensional singular equations on a square");
  add_common(md, c);
  md->add_option("--shift", shift, "node shift h1,h2 (tuned when absent)");
  md->add_option("--r", md_r, "spline degree (0 for piecewise constant)")->check(CLI::Range(0, 3));
  md->add_option("--blocks", blocks, "block Jacobi with this many blocks");
  md->callback([&] {
    run = [&] {
      const json doc = problem_doc(c, "multidim");
      const Problem2D p = cli::multidim_problem(doc);
      const double A = doc.value("A", 1.0);
      if (md_r > 0) {
        SplineParams2D prm;
        prm.N = c.n;
        prm.r = md_r;
        prm.A = A;
        return emit_solve(solve_spline(p, prm).report, c);
      }
      Grid2D g;
      if (!shift.empty()) {
        const auto v = parse_pair(shift);
        g = build_grid(c.n, A, v[0], v[1]);
      } else {
        const ShiftChoice sc = tune_shift(p, c.n, A);
        if (!sc.feasible)
          fail(ErrorKind::tuning, "no dominant shift; best margin " + std::to_string(sc.dominance.min_margin));
        g = build_grid(c.n, A, sc.h1, sc.h2);
      }
      const Solution2D sol = blocks > 0 ? parallel_solve(p, g, blocks) : assemble_solve(p, g);
      return emit_solve(sol.report, c, {{"shift", {g.h1, g.h2}}, {"sweeps", sol.sweeps}});
    };
  });

  std::string family = "circle_linear";
  std::vector<int> ns{8, 16, 32};
  auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
  add_common(conv, c);
  conv->add_option("--family", family, "case family");
  conv->add_option("--ns", ns, "sizes")->delimiter(',');
  conv->callback([&] {
    run = [&] {
      const ConvergenceReport r = run_convergence(make_case(family_from_string(family)), ns);
      return render(r, format_from_string(c.format));
    };
  });

  std::vector<double> eps{1e-2, 1e-3, 1e-4};
  auto* stab = app.add_subcommand("stability", "perturbation experiment");
  add_common(stab, c);
  stab->add_option("--family", family, "case family");
  stab->add_option("--eps", eps, "perturbation sizes")->delimiter(',');
  stab->callback([&] {
    run = [&] {
      const StabilityReport r = run_stability(make_case(family_from_string(family)), c.n, eps, c.seed);
      return render(r, format_from_string(c.format));
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  }
  try {
    if (c.threads > 0) omp_set_num_threads(c.threads);
    emit_report(run(), c.out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
