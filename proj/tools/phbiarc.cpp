// phbiarc: command-line front end.
//
// Exit codes: 0 success, 2 usage or malformed input, 3 infeasible problem,
// 4 numerical failure. Errors are reported on stderr as one JSON object.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef PHBIARC_HAVE_QUAD
#include "phbiarc/quad.hpp"
#endif
#include "phbiarc.hpp"
#include "phbiarc/io.hpp"

namespace {

using namespace phbiarc;
using io::fmt6;

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kNumerical = 4 };

int fail(Exit code, const std::string& kind, const std::string& message) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  std::cerr << j.dump() << "\n";
  return code;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::ParseError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

io::Problem load_problem(const std::string& path) {
  std::istringstream in(slurp(path));
  return io::parse_problem(in);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw io::ParseError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct InterpolateArgs {
  std::string problem, out, method = "biarc";
  bool all = false, csv = false;
};

int cmd_interpolate(const InterpolateArgs& a) {
  const auto p = load_problem(a.problem);
  Output out(a.out);
  if (a.method == "single") {
    const auto sols = solve(SinglePHProblem<double>{p.data, p.lambda});
    if (sols.empty()) throw NoSolutionError("no single PH interpolant found");
    std::size_t best = 0;
    for (std::size_t i = 1; i < sols.size(); ++i)
      if (sols[i].energy < sols[best].energy) best = i;
    if (a.csv) {
      io::CsvWriter csv(out.stream());
      csv.row({"index", "alpha0", "alpha1", "beta0", "beta1", "energy", "selected"});
      for (std::size_t i = 0; i < sols.size(); ++i)
        if (a.all || i == best)
          csv.row({std::to_string(i), fmt6(sols[i].alpha0), fmt6(sols[i].alpha1), fmt6(sols[i].beta0),
                   fmt6(sols[i].beta1), fmt6(sols[i].energy), i == best ? "1" : "0"});
      return kOk;
    }
    if (!a.all) {
      out.stream() << io::emit(io::single_file(sols[best]));
      return kOk;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : sols) arr.push_back(io::to_json(io::single_file(s)));
    out.stream() << arr.dump(2) << "\n";
    return kOk;
  }

  const auto sol = interpolate(p.data, p.lambda, p.beta0, p.beta1);
  if (sol.empty()) throw NoSolutionError("no biarc satisfies the length equation");
  const std::size_t sel = *sol.selected;
  if (a.csv) {
    io::CsvWriter csv(out.stream());
    csv.row({"index", "branch", "alpha0", "alpha1", "energy", "arc_length", "selected"});
    for (std::size_t i = 0; i < sol.candidates.size(); ++i) {
      const auto& c = sol.candidates[i];
      if (a.all || i == sel)
        csv.row({std::to_string(i), to_string(c.params().branch), fmt6(c.alpha0()), fmt6(c.alpha1()),
                 fmt6(c.energy()), fmt6(c.arc_length()), i == sel ? "1" : "0"});
    }
    return kOk;
  }
  if (!a.all) {
    out.stream() << io::emit(io::biarc_file(sol.best(), sol.candidates));
    return kOk;
  }
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : sol.candidates) arr.push_back(io::to_json(io::biarc_file(c, sol.candidates)));
  out.stream() << arr.dump(2) << "\n";
  return kOk;
}

struct SplineArgs {
  std::string nodes, out;
  std::optional<double> omega;
  bool csv = false;
  double lambda = 1;
};

int cmd_spline(const SplineArgs& a) {
  std::istringstream in(slurp(a.nodes));
  const auto nf = io::parse_nodes(in);
  SplineOptions<double> opt;
  opt.lambda = a.lambda;
  const auto sp = build_spline(nf.nodes, nf.lengths, opt);
  const auto knots = knot_mismatches(sp);
  std::vector<double> errors;
  if (a.omega) {
    if (nf.params.empty()) throw io::ParseError("--reference-omega needs a parameter s on every node");
    errors = spline_span_errors(sp, LogSpiral<double>{*a.omega}, nf.params);
  }
  const double max_error = errors.empty() ? 0 : *std::max_element(errors.begin(), errors.end());
  Output out(a.out);
  if (a.csv) {
    io::CsvWriter csv(out.stream());
    csv.row({"knot", "position", "tangent", "curvature"});
    for (const auto& k : knots)
      csv.row({std::to_string(k.knot), fmt6(k.position), fmt6(k.tangent), fmt6(k.curvature)});
    if (!errors.empty()) {
      csv.row({"span", "e_err"});
      for (std::size_t j = 0; j < errors.size(); ++j) csv.row({std::to_string(j), fmt6(errors[j])});
      csv.row({"max", fmt6(max_error)});
    }
    return kOk;
  }
  auto j = io::to_json(io::spline_file(sp));
  nlohmann::json report;
  report["knots"] = nlohmann::json::array();
  for (const auto& k : knots)
    report["knots"].push_back(
        {{"knot", k.knot}, {"position", k.position}, {"tangent", k.tangent}, {"curvature", k.curvature}});
  if (a.omega) {
    report["reference_omega"] = *a.omega;
    report["span_errors"] = errors;
    report["max_error"] = max_error;
  }
  j["report"] = report;
  out.stream() << j.dump(2) << "\n";
  return kOk;
}

template <class R>
void error_table(std::ostream& os, const std::string& param, const std::vector<ErrorReport<R>>& rows) {
  io::CsvWriter csv(os);
  csv.row({param, "E_err", "decay"});
  for (const auto& r : rows)
    csv.row({fmt6(double(r.param)), fmt6(double(r.e_err)), r.decay ? fmt6(double(*r.decay)) : ""});
}

#ifdef PHBIARC_HAVE_QUAD
constexpr const char* default_precision = "quad";
#else
constexpr const char* default_precision = "extended";
#endif

struct BenchArgs {
  std::string problem, out, method = "biarc";
  std::string precision = default_precision;
  long double omega = 0.2L;
  int kmin = 0, kmax = 8;
  int nmin = 2, nmax = 512;
  bool continuous = false;
  std::optional<double> lambda;
};

template <class R>
int spiral_rows(const BenchArgs& a) {
  std::vector<R> hs;
  for (int k = a.kmin; k <= a.kmax; ++k) hs.push_back(R(1) / R(1ULL << k));
  const auto rows = decay_table(LogSpiral<R>{R(a.omega)}, hs, a.method == "single" ? Method::Single : Method::Biarc);
  Output out(a.out);
  error_table(out.stream(), "h", rows);
  return kOk;
}

template <class R>
int circle_rows(const BenchArgs& a, int k0, int k1) {
  const auto rows = circle_order<R>(k0, k1);
  Output out(a.out);
  error_table(out.stream(), "N", rows);
  return kOk;
}

int bench_spiral(const BenchArgs& a) {
  if (a.kmin < 0 || a.kmax < a.kmin || a.kmax > 62) throw io::ParseError("need 0 <= kmin <= kmax <= 62");
#ifdef PHBIARC_HAVE_QUAD
  if (a.precision == "quad") return spiral_rows<Quad>(a);
#endif
  return spiral_rows<long double>(a);
}

int bench_circle(const BenchArgs& a) {
  auto log2i = [](int n) {
    int k = 0;
    while (k < 30 && (1 << k) < n) ++k;
    if ((1 << k) != n) throw io::ParseError("N must be a power of two");
    return k;
  };
  const int k0 = log2i(a.nmin), k1 = log2i(a.nmax);
  if (k0 < 1 || k1 < k0) throw io::ParseError("need 2 <= nmin <= nmax");
#ifdef PHBIARC_HAVE_QUAD
  if (a.precision == "quad") return circle_rows<Quad>(a, k0, k1);
#endif
  return circle_rows<long double>(a, k0, k1);
}

int bench_lambda(const BenchArgs& a) {
  const auto p = load_problem(a.problem);
  const auto opt = optimize_lambda(p.data, a.continuous);
  Output out(a.out);
  io::CsvWriter csv(out.stream());
  csv.row({"kind", "lambda", "energy"});
  for (const auto& [lam, e] : opt.grid) csv.row({"grid", fmt6(lam), fmt6(e)});
  double grid_lambda = 0, grid_e = std::numeric_limits<double>::infinity();
  for (const auto& [lam, e] : opt.grid)
    if (e < grid_e) {
      grid_e = e;
      grid_lambda = lam;
    }
  csv.row({"min", fmt6(grid_lambda), io::fmt6(grid_e)});
  if (a.continuous) csv.row({"continuous", fmt6(opt.lambda), fmt6(opt.energy)});
  return kOk;
}

int bench_beta(const BenchArgs& a) {
  const auto p = load_problem(a.problem);
  const double lambda = a.lambda.value_or(p.lambda);
  const auto opt = optimize_beta(p.data, lambda);
  const auto start = interpolate(p.data, lambda);
  Output out(a.out);
  io::CsvWriter csv(out.stream());
  csv.row({"kind", "lambda", "beta0", "beta1", "energy", "evaluations"});
  csv.row({"start", fmt6(lambda), "0", "0", fmt6(start.empty() ? INFINITY : start.best().energy()), ""});
  csv.row({"optimum", fmt6(lambda), fmt6(opt.beta0), fmt6(opt.beta1), fmt6(opt.energy),
           std::to_string(opt.evaluations)});
  return kOk;
}

int bench_single(const BenchArgs& a) {
  const auto p = load_problem(a.problem);
  const auto biarcs = interpolate(p.data, p.lambda, p.beta0, p.beta1);
  const auto singles = solve(SinglePHProblem<double>{p.data, p.lambda});
  Output out(a.out);
  io::CsvWriter csv(out.stream());
  csv.row({"method", "alpha0", "alpha1", "beta0", "beta1", "energy"});
  for (const auto& b : biarcs.candidates)
    csv.row({"biarc", fmt6(b.alpha0()), fmt6(b.alpha1()), fmt6(b.params().beta0), fmt6(b.params().beta1),
             fmt6(b.energy())});
  for (const auto& s : singles)
    csv.row({"single", fmt6(s.alpha0), fmt6(s.alpha1), fmt6(s.beta0), fmt6(s.beta1), fmt6(s.energy)});
  return kOk;
}

struct RenderArgs {
  std::string curve, out;
  io::RenderOptions opt;
  bool no_polygon = false;
};

int cmd_render(RenderArgs a) {
  const std::string text = slurp(a.curve);
  io::CurveFile f;
  // A file with all candidates holds an array; draw the first.
  const auto j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_array() && !j.empty())
    f = io::from_json(j[0]);
  else
    f = io::parse_curve(text);
  a.opt.control_polygon = !a.no_polygon;
  Output out(a.out);
  out.stream() << io::render_svg(f, a.opt);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"G2 PH biarc interpolation with prescribed arc length"};
  app.require_subcommand(1);

  InterpolateArgs ia;
  auto* interp = app.add_subcommand("interpolate", "Interpolate the data of a problem file");
  interp->add_option("problem", ia.problem, "Problem file (key = value)")->required();
  interp->add_flag("--all-candidates", ia.all, "Emit every candidate, not only the selected one");
  auto* json_flag = interp->add_flag("--json", "JSON curve file output (default)");
  interp->add_flag("--csv", ia.csv, "CSV summary instead of a curve file")->excludes(json_flag);
  interp->add_option("--method", ia.method, "biarc or single")->check(CLI::IsMember({"biarc", "single"}));
  interp->add_option("-o,--output", ia.out, "Output file (default stdout)");

  SplineArgs sa;
  auto* spline = app.add_subcommand("spline", "Build a G2 PH spline through a nodes file");
  spline->add_option("nodes", sa.nodes, "Nodes file")->required();
  spline->add_option("--reference-omega", sa.omega, "Report E_err against the log spiral with this omega");
  spline->add_option("--lambda", sa.lambda, "Tangent-speed ratio parameter per span")->check(CLI::PositiveNumber);
  auto* sjson = spline->add_flag("--json", "JSON output (default)");
  spline->add_flag("--csv", sa.csv, "CSV knot report")->excludes(sjson);
  spline->add_option("-o,--output", sa.out, "Output file (default stdout)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Numerical experiments (CSV output)");
  bench->require_subcommand(1);
  auto add_out = [&](CLI::App* c) { c->add_option("-o,--output", ba.out, "Output file (default stdout)"); };
#ifdef PHBIARC_HAVE_QUAD
  const std::vector<std::string> precisions{"extended", "quad"};
#else
  const std::vector<std::string> precisions{"extended"};
#endif
  auto add_precision = [&](CLI::App* c) {
    c->add_option("--precision", ba.precision, "Arithmetic: extended (long double) or quad")
        ->check(CLI::IsMember(precisions));
  };
  auto* spiral = bench->add_subcommand("spiral-order", "E_err on [0, 2^-k] of a log spiral");
  spiral->add_option("--omega", ba.omega, "Spiral parameter");
  spiral->add_option("--kmin", ba.kmin, "First k");
  spiral->add_option("--kmax", ba.kmax, "Last k");
  spiral->add_option("--method", ba.method, "biarc or single")->check(CLI::IsMember({"biarc", "single"}));
  add_precision(spiral);
  add_out(spiral);
  auto* circle = bench->add_subcommand("circle-order", "Full-circle spline errors for N = 2^k spans");
  circle->add_option("--nmin", ba.nmin, "Smallest N");
  circle->add_option("--nmax", ba.nmax, "Largest N");
  add_precision(circle);
  add_out(circle);
  auto* lam = bench->add_subcommand("lambda-opt", "Minimal energy over lambda with beta = 0");
  lam->add_option("problem", ba.problem, "Problem file")->required();
  lam->add_flag("--continuous", ba.continuous, "Refine the grid minimum by golden-section search");
  add_out(lam);
  auto* beta = bench->add_subcommand("beta-opt", "Minimal energy over (beta0, beta1) at fixed lambda");
  beta->add_option("problem", ba.problem, "Problem file")->required();
  beta->add_option("--lambda", ba.lambda, "Override the file's lambda")->check(CLI::PositiveNumber);
  add_out(beta);
  auto* single = bench->add_subcommand("single-compare", "Biarc candidates next to single PH interpolants");
  single->add_option("problem", ba.problem, "Problem file")->required();
  add_out(single);

  RenderArgs ra;
  auto* render = app.add_subcommand("render", "SVG with control polygon and porcupine plot");
  render->add_option("curve", ra.curve, "Curve file (JSON)")->required();
  render->add_option("--porcupine-scale", ra.opt.porcupine_scale, "Quill length per unit curvature");
  render->add_option("--samples", ra.opt.samples, "Samples per segment")->check(CLI::Range(2, 1000000));
  render->add_flag("--no-control-polygon", ra.no_polygon, "Omit the control polygon");
  render->add_option("-o,--output", ra.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (interp->parsed()) return cmd_interpolate(ia);
    if (spline->parsed()) return cmd_spline(sa);
    if (render->parsed()) return cmd_render(ra);
    if (spiral->parsed()) return bench_spiral(ba);
    if (circle->parsed()) return bench_circle(ba);
    if (lam->parsed()) return bench_lambda(ba);
    if (beta->parsed()) return bench_beta(ba);
    if (single->parsed()) return bench_single(ba);
  } catch (const io::ParseError& e) {
    return fail(kUsage, "usage", e.what());
  } catch (const SpanError& e) {
    return fail(kInfeasible, "infeasible", e.what());
  } catch (const CuspError& e) {
    return fail(kNumerical, "numerical", e.what());
  } catch (const DomainError& e) {
    // Covers InfeasibleError and DegenerateError raised by input validation.
    return fail(kInfeasible, "infeasible", e.what());
  } catch (const NoSolutionError& e) {
    return fail(kNumerical, "no_solution", e.what());
  } catch (const std::exception& e) {
    return fail(kNumerical, "numerical", e.what());
  }
  return kUsage;
}
