#include "adiabloch/cli.hpp"

#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "adiabloch/effective.hpp"
#include "adiabloch/errors.hpp"
#include "adiabloch/models.hpp"
#include "json_io.hpp"

namespace adiabloch {

namespace {

using detail::json;

constexpr int kOk = 0;
constexpr int kNumerical = 1;
constexpr int kUsage = 2;

struct Options {
  std::string model = "builtin:lambda";
  std::optional<double> gamma;
  std::string order = "inf";
  std::string norm = "spectral";
  double tol = 1e-12;
  std::string out;
  std::string format = "json";

  bool matrices = false;
  std::string method = "newton";
  int max_iter = 100;
  bool force = false;
  bool unitary = false;
  bool measure = false;
  double t_min = 1e-2;
  double t_max = 1e6;
  int points = 400;
  std::string case_id;
  std::vector<double> gammas{10.0, 20.0, 40.0};
  std::vector<int> orders{0, 1, 2, 3};
};

const char* kModelHelp =
    "Model JSON path, or builtin:lambda | builtin:lambda_delta0 | builtin:long_time | builtin:qubit | "
    "builtin:counterexample.\n"
    "Schema: {\"dim\": d, \"gamma\": g, \"strong\": {\"H\": [[[re,im],...],...], \"dissipators\": "
    "[{\"rate\": r, \"L\": [[[re,im],...],...]}]}, \"weak\": {...}}";

LindbladModel load(const std::string& source) {
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string name = source.substr(prefix.size());
    if (name == "lambda") return lambda_model({}, 10.0);
    if (name == "lambda_delta0") {
      LambdaParams p;
      p.delta = 0.0;
      p.kappa = 0.1;
      return lambda_model(p, 10.0);
    }
    if (name == "long_time") return long_time_model();
    if (name == "qubit") return qubit_model(10.0);
    if (name == "counterexample") return counterexample_model(10.0);
    throw std::invalid_argument("unknown builtin model '" + name + "'");
  }
  return model_from_json(read_file(source));
}

NormKind norm_of(const Options& o) {
  const auto k = parse_norm_kind(o.norm);
  if (!k) throw std::invalid_argument("unknown norm '" + o.norm + "' (spectral, trace, frobenius)");
  return *k;
}

// -1 for the nonperturbative generator.
int order_of(const Options& o) {
  if (o.order == "inf" || o.order == "infinity") return kNonperturbative;
  std::size_t pos = 0;
  int k = -1;
  try {
    k = std::stoi(o.order, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != o.order.size() || k < 0) throw std::invalid_argument("--order must be a nonnegative integer or inf");
  return k;
}

SolveOptions solve_options(const Options& o) {
  SolveOptions so;
  so.tol = o.tol;
  so.max_iter = o.max_iter;
  so.norm = norm_of(o);
  if (o.method == "newton") {
    so.method = SolveMethod::newton;
  } else if (o.method == "fixed_point") {
    so.method = SolveMethod::fixed_point;
  } else {
    throw std::invalid_argument("--method must be newton or fixed_point");
  }
  return so;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    write_file(o.out, text);
  }
}

void require_json(const Options& o, const char* cmd) {
  if (o.format != "json") throw std::invalid_argument(std::string(cmd) + " supports --format json only");
}

double gamma_of(const Options& o, const LindbladModel& m) { return o.gamma.value_or(m.gamma); }

// Kantorovich check over all blocks; returns false with a diagnostic when
// some block is outside the certified regime.
bool kantorovich_gate(const SpectralDecomposition& dec, const CMatrix& c, double gamma, NormKind norm,
                      json& reports) {
  bool ok = true;
  reports = json::array();
  for (std::size_t l = 0; l < dec.blocks.size(); ++l) {
    const auto kr = kantorovich_report(dec, c, gamma, l, norm);
    reports.push_back(detail::kantorovich_json(kr));
    if (!kr.solvable) {
      if (ok) std::cerr << "Kantorovich condition fails at gamma = " << gamma << ":\n";
      std::cerr << "  block " << l << ": h = " << kr.h << " > 1/2, requires gamma >= " << kr.gamma_min << '\n';
      ok = false;
    }
  }
  return ok;
}

int cmd_decompose(const Options& o) {
  require_json(o, "decompose");
  const LindbladModel m = load(o.model);
  const SpectralDecomposition dec = decompose(build_superop(m, Part::strong).matrix);
  emit(o, decomposition_to_json(dec, o.matrices));
  return kOk;
}

int cmd_solve(const Options& o) {
  require_json(o, "solve");
  const LindbladModel m = load(o.model);
  const double gamma = gamma_of(o, m);
  const CMatrix b = build_superop(m, Part::strong).matrix;
  const CMatrix c = build_superop(m, Part::weak).matrix;
  const SpectralDecomposition dec = decompose(b);
  json reports;
  const bool certified = kantorovich_gate(dec, c, gamma, norm_of(o), reports);
  json out = {{"gamma", gamma}, {"kantorovich", reports}};
  if (!certified && !o.force) {
    out["error"] = "Kantorovich condition not met; rerun with --force to attempt an uncertified solve";
    emit(o, out.dump(2));
    return kNumerical;
  }
  const auto sols = solve_all(dec, c, gamma, solve_options(o));
  json blocks = json::array();
  for (const auto& s : sols) blocks.push_back(detail::solution_json(s, o.matrices));
  out["blocks"] = blocks;
  emit(o, out.dump(2));
  return kOk;
}

int cmd_effective(const Options& o) {
  require_json(o, "effective");
  const LindbladModel m = load(o.model);
  const double gamma = gamma_of(o, m);
  const int order = order_of(o);
  const CMatrix b = build_superop(m, Part::strong).matrix;
  const CMatrix c = build_superop(m, Part::weak).matrix;
  const SpectralDecomposition dec = decompose(b);
  json out = {{"gamma", gamma}, {"order", order == kNonperturbative ? json("inf") : json(order)}};
  CMatrix k;
  if (order == kNonperturbative) {
    json reports;
    if (!kantorovich_gate(dec, c, gamma, norm_of(o), reports) && !o.force) {
      out["kantorovich"] = reports;
      out["error"] = "Kantorovich condition not met; rerun with --force to attempt an uncertified solve";
      emit(o, out.dump(2));
      return kNumerical;
    }
    const Pipeline pl = run_pipeline(m, gamma, dec, solve_options(o));
    k = pl.gen.K.matrix;
    out["similarity"] = detail::similarity_json(verify_similarity(pl.gen, pl.dec, pl.B, pl.C, gamma));
  } else {
    const auto series = effective_series(dec, c, order, order <= 3 ? KSeriesMode::closed_form
                                                                   : KSeriesMode::power_series);
    k = truncated_generator(series, gamma, order);
  }
  const Superoperator ks{m.dim, k, SuperTag::effective_K};
  out["K"] = detail::gkls_json(gkls_decompose(ks));
  const GKLSForm total = gkls_decompose({m.dim, gamma * b + k, SuperTag::custom});
  out["total_min_rate"] = total.rates.back();
  out["total_ccp"] = total.verdicts.ccp;
  emit(o, out.dump(2));
  return kOk;
}

int cmd_bound(const Options& o) {
  require_json(o, "bound");
  const LindbladModel m = load(o.model);
  const double gamma = gamma_of(o, m);
  const NormKind norm = norm_of(o);
  const CMatrix b = build_superop(m, Part::strong).matrix;
  const CMatrix c = build_superop(m, Part::weak).matrix;
  const SpectralDecomposition dec = decompose(b);
  double semigroup = 1.0;
  json measured = nullptr;
  if (o.measure) {
    const auto grid = log_time_grid(o.t_min, o.t_max, o.points);
    const Pipeline pl = run_pipeline(m, gamma, dec, solve_options(o));
    semigroup = std::max(semigroup_sup(pl.total(), grid, norm),
                         semigroup_sup(gamma * b + pl.gen.D.matrix, grid, norm));
    const auto dk = distance_curve(pl.total(), gamma * b + pl.gen.K.matrix, grid, kNonperturbative, norm);
    const auto dd = distance_curve(pl.total(), gamma * b + pl.gen.D.matrix, grid, kNonperturbative, norm);
    measured = {{"sup_distance_K", *std::max_element(dk.distances.begin(), dk.distances.end())},
                {"sup_distance_D", *std::max_element(dd.distances.begin(), dd.distances.end())},
                {"semigroup_bound", semigroup}};
  }
  json out = detail::bound_json(eternal_bound(dec, c, gamma, norm, o.unitary, semigroup));
  out["measured"] = measured;
  emit(o, out.dump(2));
  return kOk;
}

int cmd_evolve(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw std::invalid_argument("--format must be json or csv");
  const LindbladModel m = load(o.model);
  const double gamma = gamma_of(o, m);
  const int order = order_of(o);
  const NormKind norm = norm_of(o);
  const auto grid = log_time_grid(o.t_min, o.t_max, o.points);
  const Pipeline pl = run_pipeline(m, gamma, solve_options(o));
  CMatrix k = pl.gen.K.matrix;
  if (order != kNonperturbative) {
    k = truncated_generator(effective_series(pl.dec, pl.C, order,
                                             order <= 3 ? KSeriesMode::closed_form : KSeriesMode::power_series),
                            gamma, order);
  }
  const auto curve = distance_curve(pl.total(), gamma * pl.B + k, grid, order, norm);
  emit(o, o.format == "csv" ? curve_to_csv(curve) : curve_to_json(curve));
  return kOk;
}

int cmd_reproduce(const Options& o) {
  require_json(o, "reproduce");
  std::vector<std::string> ids;
  if (o.case_id == "all") {
    ids = reproduction_cases();
  } else {
    ids = {o.case_id};
  }
  json reports = json::array();
  bool pass = true;
  for (const auto& id : ids) {
    const auto rep = reproduce(id);
    pass = pass && rep.pass();
    reports.push_back(detail::report_json(rep));
    for (const auto* f : rep.failures()) {
      std::cerr << id << ": FAIL " << f->name << " (expected " << f->expected << ", computed " << f->computed
                << ")\n";
    }
  }
  emit(o, (ids.size() == 1 ? reports[0] : reports).dump(2));
  return pass ? kOk : kNumerical;
}

int cmd_scaling(const Options& o) {
  const LindbladModel m = o.model == "builtin:lambda" ? long_time_model() : load(o.model);
  ScalingOptions so;
  so.gammas = o.gammas;
  so.orders = o.orders;
  so.t_min = o.t_min;
  so.t_max = o.t_max;
  so.points = o.points;
  const auto rep = scaling_check(m, so);
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << std::setprecision(17) << "order,gamma,breakaway\n";
    for (const auto& os : rep.orders) {
      for (std::size_t g = 0; g < rep.gammas.size(); ++g) {
        csv << os.order << ',' << rep.gammas[g] << ',';
        if (os.breakaway[g]) {
          csv << *os.breakaway[g];
        } else {
          csv << "none";
        }
        csv << '\n';
      }
    }
    emit(o, csv.str());
  } else if (o.format == "json") {
    emit(o, scaling_to_json(rep));
  } else {
    throw std::invalid_argument("--format must be json or csv");
  }
  return kOk;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Effective adiabatic generators for open quantum systems", "adiabloch"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--model", o.model, kModelHelp);
  app.add_option("--gamma", o.gamma, "Strong coupling gamma (default: the model's)");
  app.add_option("--order", o.order, "Truncation order k, or inf for the nonperturbative generator");
  app.add_option("--norm", o.norm, "spectral | trace | frobenius");
  app.add_option("--tol", o.tol, "Residual tolerance of the Bloch solvers");
  app.add_option("--out", o.out, "Output path (default: stdout)");
  app.add_option("--format", o.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  auto* dec = app.add_subcommand("decompose", "Spectral data of the strong part");
  dec->add_flag("--matrices", o.matrices, "Include P, N and S matrices");

  auto* solve = app.add_subcommand("solve", "Solve the Bloch equations for every block");
  solve->add_flag("--matrices", o.matrices, "Include Omega, Omega~, U and U~");
  solve->add_option("--method", o.method, "newton | fixed_point");
  solve->add_option("--max-iter", o.max_iter, "Iteration cap");
  solve->add_flag("--force", o.force, "Attempt the solve outside the Kantorovich regime");

  auto* eff = app.add_subcommand("effective", "GKLS data of the effective generator K");
  eff->add_option("--method", o.method, "newton | fixed_point");
  eff->add_flag("--force", o.force, "Attempt the solve outside the Kantorovich regime");

  auto* bound = app.add_subcommand("bound", "Eternal-adiabaticity bounds");
  bound->add_flag("--unitary", o.unitary, "Add the unitary-case bound");
  bound->add_flag("--measure", o.measure, "Sample the semigroup bound and measured distances on the time grid");
  bound->add_option("--t-min", o.t_min);
  bound->add_option("--t-max", o.t_max);
  bound->add_option("--points", o.points);

  auto* evolve = app.add_subcommand("evolve", "Distance between exact and approximate evolutions");
  evolve->add_option("--t-min", o.t_min);
  evolve->add_option("--t-max", o.t_max);
  evolve->add_option("--points", o.points);

  auto* repro = app.add_subcommand("reproduce", "Run a reproduction case");
  std::string cases = "all";
  for (const auto& id : reproduction_cases()) cases += " | " + id;
  repro->add_option("case", o.case_id, cases)->required();

  auto* scaling = app.add_subcommand("scaling", "Breakaway-time scaling of truncated generators");
  scaling->add_option("--gammas", o.gammas, "Coupling values")->delimiter(',');
  scaling->add_option("--orders", o.orders, "Truncation orders")->delimiter(',');
  scaling->add_option("--t-min", o.t_min);
  scaling->add_option("--t-max", o.t_max);
  scaling->add_option("--points", o.points);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*dec) return cmd_decompose(o);
    if (*solve) return cmd_solve(o);
    if (*eff) return cmd_effective(o);
    if (*bound) return cmd_bound(o);
    if (*evolve) return cmd_evolve(o);
    if (*repro) return cmd_reproduce(o);
    if (*scaling) return cmd_scaling(o);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace adiabloch
