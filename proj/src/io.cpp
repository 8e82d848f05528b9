#include "qreach/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "qreach/error.hpp"

namespace qreach {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ParseError, path + ": " + msg);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number, got " + std::string(j.type_name()));
  return j.get<double>();
}

Vec vector_of(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  Vec out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Mat matrix_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i)
    rows.push_back(vector_of(j[i], path + "[" + std::to_string(i) + "]"));
  try {
    return Mat::from_rows(rows);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
}

template <class T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

// JSON has no infinity; null stands for +inf.
json extended(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
double extended_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

Branch parse_branch(const std::string& s) {
  if (s == to_string(Branch::t_optimal)) return Branch::t_optimal;
  if (s == to_string(Branch::unit_scaling)) return Branch::unit_scaling;
  throw Error(ErrorKind::ParseError, "unknown branch '" + s + "'");
}

}  // namespace

VerificationTask parse_task(const json& doc) {
  if (!doc.is_object()) fail("$", "task must be a JSON object");
  Mat a = matrix_of(field(doc, "A", "$"), "$.A");
  if (!a.square())
    throw Error(ErrorKind::DimensionMismatch, "$.A: expected a square matrix, got " +
                                                  std::to_string(a.rows()) + "x" +
                                                  std::to_string(a.cols()));
  const std::size_t d = a.rows();
  if (doc.contains("dimension")) {
    const double declared = number(doc["dimension"], "$.dimension");
    if (declared != static_cast<double>(d))
      throw Error(ErrorKind::DimensionMismatch,
                  "$.dimension: declared " + doc["dimension"].dump() + " but A is " +
                      std::to_string(d) + "x" + std::to_string(d));
  }
  Vec b = doc.contains("b") ? vector_of(doc["b"], "$.b") : Vec(d, 0.0);
  if (b.size() != d) throw Error(ErrorKind::DimensionMismatch, "$.b: expected length " + std::to_string(d));

  const json& init_doc = field(doc, "initial_set", "$");
  InitialSet init;
  if (init_doc.contains("box")) {
    const json& box = init_doc["box"];
    init = box_to_vertices(vector_of(field(box, "lower", "$.initial_set.box"), "$.initial_set.box.lower"),
                           vector_of(field(box, "upper", "$.initial_set.box"), "$.initial_set.box.upper"));
  } else if (init_doc.contains("vertices")) {
    const json& vs = init_doc["vertices"];
    if (!vs.is_array() || vs.empty()) fail("$.initial_set.vertices", "expected a non-empty array");
    std::vector<Vec> vertices;
    for (std::size_t i = 0; i < vs.size(); ++i)
      vertices.push_back(vector_of(vs[i], "$.initial_set.vertices[" + std::to_string(i) + "]"));
    init = InitialSet(std::move(vertices));
  } else {
    fail("$.initial_set", "expected 'box' or 'vertices'");
  }

  const json& prop = field(doc, "property", "$");
  QuadraticObjective objective;
  if (prop.contains("linear_range")) {
    const json& lr = prop["linear_range"];
    const std::string p = "$.property.linear_range";
    objective = linear_range_property(vector_of(field(lr, "c", p), p + ".c"),
                                      number(field(lr, "lower", p), p + ".lower"),
                                      number(field(lr, "upper", p), p + ".upper"));
  } else {
    Mat q_mat = matrix_of(field(prop, "Q", "$.property"), "$.property.Q");
    Vec q_vec = prop.contains("q") ? vector_of(prop["q"], "$.property.q") : Vec(q_mat.rows(), 0.0);
    std::optional<double> alpha;
    if (prop.contains("alpha") && !prop["alpha"].is_null())
      alpha = number(prop["alpha"], "$.property.alpha");
    objective = QuadraticObjective(std::move(q_mat), std::move(q_vec), alpha);
  }
  return VerificationTask(AffineSystem(std::move(a), std::move(b)), std::move(init),
                          std::move(objective));
}

VerificationTask parse_input(const std::filesystem::path& path) {
  const json doc = read_json(path);
  try {
    return parse_task(doc);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

Mat parse_matrix(const json& doc, const std::string& key) {
  if (doc.is_object()) return matrix_of(field(doc, key.c_str(), "$"), "$." + key);
  return matrix_of(doc, "$");
}

Mat parse_matrix_file(const std::filesystem::path& path) {
  const json doc = read_json(path);
  try {
    return parse_matrix(doc);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

json export_problem(const VerificationTask& task, double epsilon, const Tolerances& tol) {
  const VerificationTask h = homogenize(task, tol);
  const std::size_t d = h.dim();
  Mat weight(d, d);
  double weighted_q = 0.0;
  json vertices = json::array();
  for (const Vec& v : h.init.vertices()) {
    weight += outer(v, v);
    weighted_q += quad_form(h.objective.Q, v);
    vertices.push_back(v);
  }
  const json psd = "psd";
  json out;
  out["format"] = "qreach-sdp-export/1";
  out["dimension"] = d;
  out["A"] = h.system.A;
  out["Q"] = h.objective.Q;
  out["q"] = h.objective.q;
  out["shift"] = affine_shift(task.system, tol);
  out["vertices"] = vertices;
  out["epsilon"] = epsilon;
  out["problems"] = {
      {"unit_scaling",
       {{"branch", to_string(Branch::unit_scaling)},
        {"t", 1.0},
        {"constraints",
         {{{"expr", "P - Q"}, {"cone", psd}},
          {{"expr", "P - A^T P A - epsilon * I"}, {"cone", psd}},
          {{"expr", "P"}, {"cone", psd}}}}}},
      {"t_optimal",
       {{"branch", to_string(Branch::t_optimal)},
        {"t", "lambda_max(P^{-1/2} Q P^{-1/2})"},
        {"constraints",
         {{{"expr", "P - A^T P A - epsilon * I"}, {"cone", psd}},
          {{"expr", "P"}, {"cone", psd}}}}}}};
  out["objectives"] = {
      {"F0", {{"expr", "max_v v^T P v"}}},
      {"F1", {{"expr", "max_v v^T (P - Q) v"}}},
      {"F2", {{"expr", "trace(W P)"}, {"W", weight}}},
      {"F3", {{"expr", "trace(W P) - c"}, {"W", weight}, {"c", weighted_q}}},
      {"F4", {{"expr", "lambda_max(P)"}}}};
  out["feedback"] = "write the solution as {\"P\": [[...]]} and pass it with --user-P";
  return out;
}

void to_json(json& j, const Mat& m) { j = m.to_rows(); }
void from_json(const json& j, Mat& m) { m = Mat::from_rows(j.get<std::vector<std::vector<double>>>()); }

void to_json(json& j, const StabilityCertificate& c) {
  j = {{"P", c.P}, {"residual_margin", c.residual_margin}, {"norm_A_P", c.norm_A_P},
       {"lmin_P", c.lmin_P}};
}
void from_json(const json& j, StabilityCertificate& c) {
  c.P = j.at("P").get<Mat>();
  c.residual_margin = j.at("residual_margin").get<double>();
  c.norm_A_P = j.at("norm_A_P").get<double>();
  c.lmin_P = j.at("lmin_P").get<double>();
}

void to_json(json& j, const BoundScalars& s) {
  j = {{"t", s.t}, {"S", s.S}, {"V", s.V}, {"mu", s.mu}, {"k_strict", s.k_strict},
       {"log_argument", s.log_argument}};
}
void from_json(const json& j, BoundScalars& s) {
  s.t = j.at("t").get<double>();
  s.S = j.at("S").get<double>();
  s.V = j.at("V").get<double>();
  s.mu = j.at("mu").get<double>();
  s.k_strict = j.at("k_strict").get<std::size_t>();
  s.log_argument = j.at("log_argument").get<double>();
}

void to_json(json& j, const CandidateResult& r) {
  j = {{"label", r.label}, {"branch", to_string(r.branch)}, {"t", r.t},
       {"K", optional_to_json(r.K)}, {"error", r.error}, {"scores", r.scores}};
}
void from_json(const json& j, CandidateResult& r) {
  r.label = j.at("label").get<std::string>();
  r.branch = parse_branch(j.at("branch").get<std::string>());
  r.t = j.at("t").get<double>();
  r.K = optional_from_json<std::size_t>(j.at("K"));
  r.error = j.at("error").get<std::string>();
  r.scores = j.at("scores").get<std::array<double, 5>>();
}

void to_json(json& j, const HorizonBound& b) {
  j = {{"K", b.K}, {"strategy", b.strategy}, {"branch", to_string(b.branch)},
       {"scalars", b.scalars}, {"certificate", b.certificate}, {"candidates", b.candidates}};
}
void from_json(const json& j, HorizonBound& b) {
  b.K = j.at("K").get<std::size_t>();
  b.strategy = j.at("strategy").get<std::string>();
  b.branch = parse_branch(j.at("branch").get<std::string>());
  b.scalars = j.at("scalars").get<BoundScalars>();
  b.certificate = j.at("certificate").get<StabilityCertificate>();
  b.candidates = j.at("candidates").get<std::vector<CandidateResult>>();
}

void to_json(json& j, const Optimum& o) {
  j = {{"value", o.value}, {"arg_k", o.arg_k}, {"arg_vertex", o.arg_vertex}, {"bound", o.bound}};
}
void from_json(const json& j, Optimum& o) {
  o.value = j.at("value").get<double>();
  o.arg_k = j.at("arg_k").get<std::size_t>();
  o.arg_vertex = j.at("arg_vertex").get<Vec>();
  o.bound = j.at("bound").get<HorizonBound>();
}

void to_json(json& j, const TailInfo& t) {
  j = {{"horizon", t.horizon}, {"bound", extended(t.bound)}, {"sampled_max", t.sampled_max},
       {"sampled_arg_k", t.sampled_arg_k}, {"strategy", t.strategy}};
}
void from_json(const json& j, TailInfo& t) {
  t.horizon = j.at("horizon").get<std::size_t>();
  t.bound = extended_from(j.at("bound"));
  t.sampled_max = j.at("sampled_max").get<double>();
  t.sampled_arg_k = j.at("sampled_arg_k").get<std::size_t>();
  t.strategy = j.at("strategy").get<std::string>();
}

void to_json(json& j, const Verdict& v) {
  j = {{"status", to_string(v.status)}, {"alpha", v.alpha},
       {"optimum", optional_to_json(v.optimum)}, {"witness", v.witness},
       {"tail", optional_to_json(v.tail)}, {"notes", v.notes}};
}
void from_json(const json& j, Verdict& v) {
  v.status = parse_status(j.at("status").get<std::string>());
  v.alpha = j.at("alpha").get<double>();
  v.optimum = optional_from_json<Optimum>(j.at("optimum"));
  v.witness = j.at("witness").get<std::vector<Vec>>();
  v.tail = optional_from_json<TailInfo>(j.at("tail"));
  v.notes = j.at("notes").get<std::vector<std::string>>();
}

void to_json(json& j, const OracleReport& r) {
  j = {{"horizon", r.horizon},
       {"nu_samples", r.nu_samples},
       {"offset", r.offset},
       {"sup_emp", r.sup_emp},
       {"arg_sup", r.arg_sup},
       {"k_strict_emp", optional_to_json(r.k_strict_emp)},
       {"k_geq_emp", optional_to_json(r.k_geq_emp)},
       {"K_strict_emp", optional_to_json(r.K_strict_emp)},
       {"K_geq_emp", optional_to_json(r.K_geq_emp)}};
}
void from_json(const json& j, OracleReport& r) {
  r.horizon = j.at("horizon").get<std::size_t>();
  r.nu_samples = j.at("nu_samples").get<std::vector<double>>();
  r.offset = j.at("offset").get<double>();
  r.sup_emp = j.at("sup_emp").get<double>();
  r.arg_sup = j.at("arg_sup").get<std::size_t>();
  r.k_strict_emp = optional_from_json<std::size_t>(j.at("k_strict_emp"));
  r.k_geq_emp = optional_from_json<std::size_t>(j.at("k_geq_emp"));
  r.K_strict_emp = optional_from_json<std::size_t>(j.at("K_strict_emp"));
  r.K_geq_emp = optional_from_json<std::size_t>(j.at("K_geq_emp"));
}

}  // namespace qreach
