#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json_io.hpp"

namespace adiabloch {

namespace detail {

namespace {

json float_json(double x, FloatFormat format) {
  if (format == FloatFormat::decimal) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return std::string(buf);
}

double float_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() && *end == '\0') return x;
  }
  throw std::invalid_argument(where + ": expected a number");
}

cplx complex_from_json(const json& j, const std::string& where) {
  if (j.is_array() && j.size() == 2) return {float_from_json(j[0], where), float_from_json(j[1], where)};
  if (j.is_number()) return {j.get<double>(), 0.0};
  throw std::invalid_argument(where + ": complex entries must be [re, im]");
}

GeneratorPart part_from_json(const json& j, Index d, const std::string& name) {
  if (!j.is_object()) throw std::invalid_argument("model: '" + name + "' must be an object");
  GeneratorPart part;
  part.hamiltonian = j.contains("H") ? matrix_from_json(j.at("H"), d, d, name + ".H") : CMatrix::Zero(d, d);
  if (j.contains("dissipators")) {
    const json& list = j.at("dissipators");
    if (!list.is_array()) throw std::invalid_argument("model: " + name + ".dissipators must be an array");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string where = name + ".dissipators[" + std::to_string(k) + "]";
      const json& dj = list[k];
      if (!dj.is_object() || !dj.contains("rate") || !dj.contains("L")) {
        throw std::invalid_argument("model: " + where + " needs 'rate' and 'L'");
      }
      part.dissipators.push_back({float_from_json(dj.at("rate"), where + ".rate"),
                                  matrix_from_json(dj.at("L"), d, d, where + ".L")});
    }
  }
  return part;
}

json part_json(const GeneratorPart& part, FloatFormat format) {
  json j;
  j["H"] = matrix_json(part.hamiltonian, format);
  j["dissipators"] = json::array();
  for (const auto& dis : part.dissipators) {
    j["dissipators"].push_back({{"rate", float_json(dis.rate, format)}, {"L", matrix_json(dis.jump, format)}});
  }
  return j;
}

}  // namespace

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json complex_json(cplx z, FloatFormat format) {
  return json::array({float_json(z.real(), format), float_json(z.imag(), format)});
}

json matrix_json(const CMatrix& m, FloatFormat format) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k), format));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const json& j, Index rows, Index cols, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows) {
    throw std::invalid_argument(where + ": expected " + std::to_string(rows) + " rows");
  }
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
      throw std::invalid_argument(where + ": expected " + std::to_string(cols) + " columns");
    }
    for (Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)], where);
  }
  return m;
}

json model_json(const LindbladModel& model, FloatFormat format) {
  return {{"dim", model.dim},
          {"gamma", float_json(model.gamma, format)},
          {"strong", part_json(model.strong, format)},
          {"weak", part_json(model.weak, format)}};
}

json report_json(const ReproductionReport& report) {
  json items = json::array();
  for (const auto& it : report.items) {
    const char* cmp = it.comparison == Comparison::within ? "within" : it.comparison == Comparison::at_most ? "at_most" : "at_least";
    items.push_back({{"name", it.name},
                     {"expected", number(it.expected)},
                     {"computed", number(it.computed)},
                     {"provenance", std::string(to_string(it.provenance))},
                     {"tol", number(it.tol)},
                     {"comparison", cmp},
                     {"relative", it.relative},
                     {"deviation", number(it.deviation)},
                     {"pass", it.pass}});
  }
  return {{"case", report.case_id}, {"pass", report.pass()}, {"items", items}};
}

json decomposition_json(const SpectralDecomposition& dec, bool include_matrices) {
  json blocks = json::array();
  for (const auto& b : dec.blocks) {
    json jb = {{"eigenvalue", complex_json(b.eigenvalue)},
               {"rank", b.rank},
               {"index", b.index},
               {"projection_norm", op_norm(b.projection)},
               {"resolvent_norm", op_norm(b.reduced_resolvent)},
               {"nilpotent_norm", op_norm(b.nilpotent)}};
    if (include_matrices) {
      jb["projection"] = matrix_json(b.projection);
      jb["nilpotent"] = matrix_json(b.nilpotent);
      jb["reduced_resolvent"] = matrix_json(b.reduced_resolvent);
    }
    blocks.push_back(std::move(jb));
  }
  const auto& r = dec.residuals;
  return {{"dim", dec.dim},
          {"cluster_tol", dec.cluster_tol},
          {"blocks", blocks},
          {"residuals",
           {{"idempotency", r.idempotency_defect},
            {"identity", r.identity_defect},
            {"commutation", r.commut_defect},
            {"resolvent", r.resolvent_defect},
            {"nilpotent", r.nilpotent_defect},
            {"reconstruction", r.reconstruction_defect},
            {"index_consistent", r.index_consistent}}}};
}

json kantorovich_json(const KantorovichReport& kr) {
  return {{"block", kr.block},         {"norm", std::string(to_string(kr.norm))},
          {"mu", number(kr.mu)},       {"beta", number(kr.beta)},
          {"nu", number(kr.nu)},       {"lipschitz", number(kr.lipschitz)},
          {"h", number(kr.h)},         {"theta", number(kr.theta)},
          {"xi", number(kr.xi)},       {"gamma_min", number(kr.gamma_min)},
          {"solvable", kr.solvable},   {"quadratic", kr.quadratic}};
}

json solution_json(const BlochSolution& sol, bool include_matrices) {
  const auto& r = sol.residuals;
  json j = {{"block", sol.block},
            {"method", std::string(to_string(sol.method))},
            {"iterations", sol.iterations},
            {"certified", sol.certified},
            {"certificate", "Kantorovich ball of the U equation, transported to Omega"},
            {"residuals",
             {{"omega", r.omega},
              {"omega_conjugate", r.omega_conjugate},
              {"u", r.u},
              {"ut", r.ut},
              {"omega_constraint", r.omega_constraint},
              {"omega_conjugate_constraint", r.omega_conjugate_constraint},
              {"u_consistency", r.u_consistency},
              {"ut_consistency", r.ut_consistency}}},
            {"kantorovich", kantorovich_json(sol.kantorovich)}};
  if (include_matrices) {
    j["Omega"] = matrix_json(sol.Omega);
    j["OmegaT"] = matrix_json(sol.OmegaT);
    j["U"] = matrix_json(sol.U);
    j["Ut"] = matrix_json(sol.Ut);
  }
  return j;
}

json bound_json(const BoundReport& b) {
  json gl = json::array(), pn = json::array();
  for (double x : b.gamma_l) gl.push_back(number(x));
  for (double x : b.projection_norms) pn.push_back(number(x));
  json j = {{"gamma", b.gamma},
            {"norm", std::string(to_string(b.norm))},
            {"gamma_l", gl},
            {"projection_norms", pn},
            {"loose_bound", number(b.loose_bound)},
            {"applicable", b.applicable},
            {"tight_valid", b.tight_valid},
            {"semigroup_bound", number(b.semigroup_bound)},
            {"tight_bound_D", number(b.tight_bound_D)},
            {"tight_bound_K", number(b.tight_bound_K)},
            {"distinct_eigenvalues", b.distinct_eigenvalues},
            {"spectral_gap", number(b.spectral_gap)}};
  if (b.norm != NormKind::trace) {
    j["note"] = "loose bound is stated for the trace-induced norm; evaluated here in the " +
                std::string(to_string(b.norm)) + " norm as a diagnostic";
  }
  j["unitary_bound"] = b.unitary_bound ? number(*b.unitary_bound) : json(nullptr);
  return j;
}

json gkls_json(const GKLSForm& f) {
  json rates = json::array(), jumps = json::array();
  for (double r : f.rates) rates.push_back(r);
  for (const auto& l : f.jumps) jumps.push_back(matrix_json(l));
  return {{"dim", f.dim},
          {"hamiltonian", matrix_json(f.hamiltonian)},
          {"rates", rates},
          {"jumps", jumps},
          {"verdicts", {{"hp", f.verdicts.hp}, {"tp", f.verdicts.tp}, {"ccp", f.verdicts.ccp}}}};
}

json similarity_json(const SimilarityReport& r) {
  return {{"u_intertwining", r.u_intertwining},
          {"ut_intertwining", r.ut_intertwining},
          {"w_intertwining", r.w_intertwining},
          {"w_inverse", r.w_inverse},
          {"block_structure", r.block_structure},
          {"ptilde_idempotency", r.ptilde_idempotency},
          {"ptilde_commutation", r.ptilde_commutation},
          {"w_intertwining_blocks", r.w_intertwining_blocks},
          {"direct_rotation", r.direct_rotation},
          {"conjugation", r.conjugation},
          {"spectrum_distance", r.spectrum.max_distance},
          {"spectrum_collision", r.spectrum.collision}};
}

json scaling_json(const ScalingReport& r) {
  json orders = json::array();
  for (const auto& o : r.orders) {
    json times = json::array();
    for (const auto& t : o.breakaway) times.push_back(t ? json(*t) : json(nullptr));
    orders.push_back({{"order", o.order},
                      {"breakaway", times},
                      {"slope", o.slope ? json(*o.slope) : json(nullptr)},
                      {"lower_bound_only", o.lower_bound_only}});
  }
  return {{"gammas", r.gammas},
          {"plateaus", r.plateaus},
          {"tail_slopes", r.tail_slopes},
          {"infinite_breakaway", r.infinite_breakaway},
          {"reference_plateau", r.reference_plateau},
          {"threshold", r.threshold},
          {"orders", orders}};
}

json curve_json(const DistanceCurve& c) {
  json env = json::array();
  for (const auto& [t, v] : c.envelope) env.push_back({t, v});
  return {{"order", c.order == kNonperturbative ? json("inf") : json(c.order)},
          {"norm", std::string(to_string(c.norm))},
          {"times", c.times},
          {"distances", c.distances},
          {"envelope", env}};
}

}  // namespace detail

using detail::json;

std::string model_to_json(const LindbladModel& model, FloatFormat format) {
  return detail::model_json(model, format).dump(2);
}

LindbladModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("model: malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw std::invalid_argument("model: missing integer 'dim'");
  }
  LindbladModel m;
  m.dim = j.at("dim").get<Index>();
  if (m.dim <= 0) throw std::invalid_argument("model: 'dim' must be positive");
  m.gamma = j.contains("gamma") ? detail::float_from_json(j.at("gamma"), "gamma") : 1.0;
  m.strong = detail::part_from_json(j.value("strong", json::object()), m.dim, "strong");
  m.weak = detail::part_from_json(j.value("weak", json::object()), m.dim, "weak");
  m.validate(1e-10);
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

std::string report_to_json(const ReproductionReport& report) { return detail::report_json(report).dump(2); }

std::string decomposition_to_json(const SpectralDecomposition& dec, bool include_matrices) {
  return detail::decomposition_json(dec, include_matrices).dump(2);
}

std::string bound_to_json(const BoundReport& report) { return detail::bound_json(report).dump(2); }

std::string gkls_to_json(const GKLSForm& form) { return detail::gkls_json(form).dump(2); }

std::string scaling_to_json(const ScalingReport& report) { return detail::scaling_json(report).dump(2); }

std::string curve_to_json(const DistanceCurve& curve) { return detail::curve_json(curve).dump(2); }

std::string curve_to_csv(const DistanceCurve& curve) {
  std::ostringstream out;
  out << std::setprecision(17);
  const std::string order = curve.order == kNonperturbative ? "inf" : std::to_string(curve.order);
  const std::string_view norm = to_string(curve.norm);
  out << "t,distance,order,norm\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out << curve.times[i] << ',' << curve.distances[i] << ',' << order << ',' << norm << '\n';
  }
  return out.str();
}

}  // namespace adiabloch
