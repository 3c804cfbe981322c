#include "streamcode/serialize.hpp"

#include <fstream>
#include <sstream>

namespace streamcode::serialize {

using gf::Field;
using gf::FieldElement;

namespace {

bool prime_spec(const gf::FieldSpec& s) { return s.degrees.size() == 1 && s.degrees[0] == 1; }

// dims[l]: flat size of an element of layer l (dims[0] = 1 is F_p).
std::vector<std::size_t> layer_dims(const gf::FieldSpec& s) {
  std::vector<std::size_t> dims{1};
  if (!prime_spec(s))
    for (int d : s.degrees) dims.push_back(dims.back() * static_cast<std::size_t>(d));
  return dims;
}

Json nest(std::span<const gf::Residue> flat, std::size_t level, const std::vector<std::size_t>& dims) {
  if (level == 0) return flat[0];
  Json arr = Json::array();
  const std::size_t block = dims[level - 1];
  for (std::size_t off = 0; off < flat.size(); off += block) arr.push_back(nest(flat.subspan(off, block), level - 1, dims));
  return arr;
}

void flatten(const Json& j, std::size_t level, const std::vector<std::size_t>& dims, std::uint32_t p, gf::Coeffs& out) {
  if (level == 0) {
    if (!j.is_number_integer()) throw std::invalid_argument("element JSON: expected an integer residue");
    const auto v = j.get<std::int64_t>();
    if (v < 0 || v >= static_cast<std::int64_t>(p)) throw std::invalid_argument("element JSON: residue outside [0, p-1]");
    out.push_back(static_cast<gf::Residue>(v));
    return;
  }
  const std::size_t width = dims[level] / dims[level - 1];
  if (!j.is_array() || j.size() != width)
    throw std::invalid_argument("element JSON: expected " + std::to_string(width) + " coefficients");
  for (const auto& c : j) flatten(c, level - 1, dims, p, out);
}

std::size_t depth_of(const gf::FieldSpec& s) { return layer_dims(s).size() - 1; }

Json params_to_json(const CodeParams& p) {
  Json j;
  j["N"] = p.N;
  j["B"] = p.B;
  j["W"] = p.W ? Json(*p.W) : Json(nullptr);
  j["T"] = p.T;
  j["a"] = p.a;
  j["delta"] = p.delta;
  j["delta_prime"] = p.delta_prime;
  j["n"] = p.n;
  j["k"] = p.k;
  return j;
}

}  // namespace

Json field_to_json(const gf::FieldSpec& spec) {
  Json j;
  j["p"] = spec.p;
  j["degrees"] = spec.degrees;
  const auto dims = layer_dims(spec);
  Json polys = Json::array();
  for (std::size_t l = 0; l < spec.irreducible_polys.size(); ++l) {
    Json poly = Json::array();
    for (const auto& c : spec.irreducible_polys[l]) poly.push_back(nest(gf::view(c), l, dims));
    polys.push_back(std::move(poly));
  }
  j["irreducible"] = std::move(polys);
  return j;
}

gf::FieldSpec field_from_json(const Json& j) {
  gf::FieldSpec s;
  s.p = j.at("p").get<std::uint32_t>();
  s.degrees = j.at("degrees").get<std::vector<int>>();
  if (s.degrees.empty()) throw std::invalid_argument("field JSON: empty degree list");
  for (int d : s.degrees)
    if (d <= 0) throw std::invalid_argument("field JSON: non-positive degree");
  const auto dims = layer_dims(s);
  const auto& polys = j.at("irreducible");
  if (!polys.is_array()) throw std::invalid_argument("field JSON: irreducible must be an array");
  for (std::size_t l = 0; l < polys.size(); ++l) {
    if (l + 1 >= dims.size()) throw std::invalid_argument("field JSON: too many moduli");
    std::vector<gf::Coeffs> poly;
    for (const auto& c : polys[l]) {
      gf::Coeffs flat;
      flatten(c, l, dims, s.p, flat);
      poly.push_back(std::move(flat));
    }
    s.irreducible_polys.push_back(std::move(poly));
  }
  return s;
}

Json element_to_json(const FieldElement& x) {
  if (!x.valid()) throw std::invalid_argument("element_to_json: element has no field");
  const auto& spec = x.field().spec();
  return nest(x.coeffs(), depth_of(spec), layer_dims(spec));
}

FieldElement element_from_json(const Field& field, const Json& j) {
  const auto& spec = field.spec();
  gf::Coeffs flat;
  flatten(j, depth_of(spec), layer_dims(spec), spec.p, flat);
  return field.from_coeffs(gf::view(flat));
}

Json matrix_to_json(const gf::Matrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(element_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

gf::Matrix matrix_from_json(const Field& field, const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("matrix JSON: expected an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  gf::Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw std::invalid_argument("matrix JSON: ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = element_from_json(field, j[r][c]);
  }
  return m;
}

Json code_to_json(const BlockCode& code) {
  Json j;
  j["params"] = params_to_json(code.params);
  j["construction"] = to_string(code.construction);
  j["field"] = field_to_json(code.field->spec());
  j["subfield_order"] = code.subfield_order;
  j["generator"] = matrix_to_json(code.generator);
  if (code.construction == Construction::B) {
    Json pts = Json::array();
    for (const auto& x : code.eval_points) pts.push_back(element_to_json(x));
    j["eval_points"] = std::move(pts);
  }
  if (code.gamma) {
    Json g;
    g["field"] = field_to_json(code.gamma->field().spec());
    g["entries"] = matrix_to_json(*code.gamma);
    j["gamma"] = std::move(g);
  }
  return j;
}

BlockCode code_from_json(const Json& j) {
  BlockCode code;
  const auto& pj = j.at("params");
  auto& p = code.params;
  p.N = pj.at("N").get<int>();
  p.B = pj.at("B").get<int>();
  if (pj.contains("W") && !pj.at("W").is_null()) p.W = pj.at("W").get<int>();
  p.T = pj.at("T").get<int>();
  p.a = pj.at("a").get<int>();
  p.delta = pj.at("delta").get<int>();
  p.delta_prime = pj.at("delta_prime").get<int>();
  p.n = pj.at("n").get<int>();
  p.k = pj.at("k").get<int>();
  if (p.n < 1 || p.k < 1 || p.k > p.n) throw std::invalid_argument("code JSON: invalid n, k");

  code.construction = construction_from_string(j.at("construction").get<std::string>());
  code.field = gf::make_field_from_spec(field_from_json(j.at("field")));
  code.subfield_order = j.value("subfield_order", std::uint64_t{code.field->characteristic()});
  code.generator = matrix_from_json(*code.field, j.at("generator"));
  if (code.generator.rows() != static_cast<std::size_t>(p.k) || code.generator.cols() != static_cast<std::size_t>(p.n))
    throw std::invalid_argument("code JSON: generator shape does not match k x n");
  if (j.contains("eval_points")) {
    for (const auto& x : j.at("eval_points")) code.eval_points.push_back(element_from_json(*code.field, x));
    if (code.eval_points.size() != static_cast<std::size_t>(p.n))
      throw std::invalid_argument("code JSON: eval_points must have n entries");
  }
  if (j.contains("gamma")) {
    const auto gfield = gf::make_field_from_spec(field_from_json(j.at("gamma").at("field")));
    code.gamma = matrix_from_json(*gfield, j.at("gamma").at("entries"));
  }
  return code;
}

std::string dump_code(const BlockCode& code) { return code_to_json(code).dump(2) + "\n"; }

BlockCode load_code(const std::string& text) { return code_from_json(Json::parse(text)); }

void save_code_file(const BlockCode& code, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_code(code);
  if (!out) throw std::runtime_error("write failed for " + path);
}

BlockCode load_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_code(ss.str());
}

Json report_to_json(const conformance::ConformanceReport& report) {
  Json j;
  j["params"] = {{"N", report.N}, {"B", report.B}, {"T", report.T}, {"n", report.n}, {"k", report.k}};
  j["pass"] = report.pass;
  if (!report.reason.empty()) j["reason"] = report.reason;
  j["violation_count"] = report.violation_count;
  Json vs = Json::array();
  for (const auto& v : report.violations) {
    vs.push_back({{"coordinate", v.coordinate}, {"clause", conformance::to_string(v.clause)}, {"erased", v.erased}});
  }
  j["violations"] = std::move(vs);
  j["isolated_checked"] = report.isolated_checked;
  j["burst_checked"] = report.burst_checked;
  return j;
}

}  // namespace streamcode::serialize
