#include "numrange/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "numrange/errors.hpp"

namespace numrange {

namespace {

using json = nlohmann::json;

json point(Complex z) { return json::array({z.real(), z.imag()}); }

json complex_list(const std::vector<Complex>& zs) {
  json out = json::array();
  for (Complex z : zs) out.push_back(point(z));
  return out;
}

json matrix(const ComplexMatrix& a) {
  json re = json::array(), im = json::array();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    json rr = json::array(), ri = json::array();
    for (std::size_t j = 0; j < a.dim(); ++j) {
      rr.push_back(a(i, j).real());
      ri.push_back(a(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return {{"d", a.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

json basis(const OrthonormalBasis& q) {
  json cols = json::array();
  for (const auto& c : q.columns()) cols.push_back(complex_list(c));
  return {{"ambient_dim", q.ambient_dim()}, {"dim", q.size()}, {"columns", std::move(cols)}};
}

json ellipse(const EllipseParams& e) {
  return {{"center", point(e.center)},
          {"foci", json::array({point(e.foci.first), point(e.foci.second)})},
          {"semi_minor", e.semi_minor},
          {"semi_major", e.semi_major()}};
}

json affine(const Affine2& t) {
  return {{"linear", json::array({json::array({t.t00, t.t01}), json::array({t.t10, t.t11})})},
          {"shift", point(t.shift)}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < std::min(byte, text.size()); ++k) line += text[k] == '\n';
  return line;
}

std::vector<std::vector<double>> real_rows(const json& doc, const char* field, std::size_t d) {
  if (!doc.contains(field)) throw ParseError(std::string("missing field \"") + field + "\"");
  const json& rows = doc[field];
  if (!rows.is_array() || rows.size() != d)
    throw ParseError(std::string("field \"") + field + "\" must be an array of " + std::to_string(d) + " rows");
  std::vector<std::vector<double>> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    const json& row = rows[i];
    const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != d)
      throw ParseError("field \"" + where + "\" must have " + std::to_string(d) + " entries (matrix must be square)");
    for (std::size_t j = 0; j < d; ++j) {
      if (!row[j].is_number())
        throw ParseError("field \"" + where + "[" + std::to_string(j) + "]\" is not a number");
      const double v = row[j].get<double>();
      if (!std::isfinite(v)) throw ParseError("field \"" + where + "[" + std::to_string(j) + "]\" is not finite");
      out[i].push_back(v);
    }
  }
  return out;
}

std::string csv_line(Point p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.real(), p.imag());
  return buf;
}

}  // namespace

ComplexMatrix parse_matrix(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": malformed JSON (" +
                     e.what() + ")");
  }
  if (!doc.is_object()) throw ParseError("line 1: matrix file must be a JSON object");
  if (!doc.contains("d")) throw ParseError("missing field \"d\"");
  if (!doc["d"].is_number_unsigned() || doc["d"].get<std::size_t>() == 0)
    throw ParseError("field \"d\" must be a positive integer");
  const auto d = doc["d"].get<std::size_t>();
  const auto re = real_rows(doc, "re", d), im = real_rows(doc, "im", d);
  ComplexMatrix a(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = Complex(re[i][j], im[i][j]);
  return a;
}

ComplexMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_matrix(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string matrix_json(const ComplexMatrix& a) { return dump(matrix(a)); }

std::string polygon_csv(const ConvexPolygon& p) {
  std::string out = "x,y\n";
  for (Point v : p.vertices()) out += csv_line(v);
  return out;
}

std::string cloud_csv(const SampleCloud& c) {
  std::string out = "x,y\n";
  for (Point v : c.points) out += csv_line(v);
  return out;
}

std::string basis_json(const OrthonormalBasis& q) { return dump(basis(q)); }

std::string extremes_json(const std::vector<ExtremePointReport>& e) {
  json out = json::array();
  for (const auto& r : e)
    out.push_back({{"point", point(r.point)},
                   {"kind", r.kind == ExtremePointReport::Kind::exposed ? "exposed" : "non_exposed"},
                   {"multiply_generated", r.multiply_generated},
                   {"preimage", basis(r.preimage)},
                   {"normal_arc", json::array({r.normal_arc.lo, r.normal_arc.hi})}});
  return dump(out);
}

std::string flats_json(const std::vector<FlatPortion>& f) {
  json out = json::array();
  for (const auto& p : f)
    out.push_back({{"theta", p.theta},
                   {"endpoint_minus", point(p.endpoint_minus)},
                   {"endpoint_plus", point(p.endpoint_plus)},
                   {"length", p.length}});
  return dump(out);
}

std::string birth_json(const BirthFamily& family, const std::vector<BirthRow>& rows) {
  json table = json::array();
  for (const auto& r : rows)
    table.push_back({{"eps", r.eps},
                     {"p_plus", point(r.p_plus)},
                     {"p_minus", point(r.p_minus)},
                     {"flat_length", r.flat_length},
                     {"hausdorff_to_alpha", r.hausdorff_to_alpha},
                     {"endpoint_error", r.endpoint_error},
                     {"range_distance", r.range_distance},
                     {"matrix", matrix(family.member(r.eps))}});
  const json fam{{"alpha", point(family.alpha)},
                 {"theta", family.theta},
                 {"sigma", family.sigma},
                 {"support", family.support},
                 {"lambda", family.lambda},
                 {"mu_plus", family.mu_plus},
                 {"mu_minus", family.mu_minus},
                 {"subspace", basis(family.subspace)},
                 {"projection", matrix(family.projection)},
                 {"h", matrix(family.h.matrix())}};
  return dump({{"family", fam}, {"rows", std::move(table)}});
}

std::string classification_json(const KippenhahnClassification& c) {
  json out{{"class", to_string(c.cls)},
           {"shape", to_string(c.shape)},
           {"normal_eigenvalues", complex_list(c.normal_eigenvalues)},
           {"flat_angles", c.flat_angles},
           {"rank_one_angles", c.rank_one_angles},
           {"certificates_agree", c.certificates_agree},
           {"eigenvalue_offset", c.eigenvalue_offset}};
  if (c.elliptic) {
    out["elliptic"] = {{"lambda", point(c.elliptic->lambda)},
                       {"foci", json::array({point(c.elliptic->foci.first), point(c.elliptic->foci.second)})},
                       {"minor_axis", c.elliptic->minor_axis}};
  } else {
    out["elliptic"] = nullptr;
  }
  out["block_ellipse"] = c.block_ellipse ? ellipse(*c.block_ellipse) : json(nullptr);
  return dump(out);
}

std::string canonical_json(const CanonicalForm3& c) {
  return dump({{"kind", to_string(c.kind)},
               {"parameter", c.parameter},
               {"matrix", matrix(c.matrix)},
               {"unitary", matrix(c.unitary)},
               {"affine", affine(c.affine)}});
}

ClosureReport closure_report(const ComplexMatrix& a, const std::vector<double>& eps) {
  ClosureReport r;
  r.in_closure_E3 = in_closure_E3(a);
  r.in_closure_F3 = in_closure_F3(a);
  for (double e : eps) {
    ClosureWitness w;
    w.eps = e;
    try {
      w.e3 = e3_witness(a, e);
      w.e3_class = to_string(classify(w.e3).cls);
    } catch (const PreconditionError& err) {
      w.e3_error = err.what();
    }
    try {
      w.f3 = f3_witness(a, e);
      w.f3_class = to_string(classify(w.f3).cls);
    } catch (const PreconditionError& err) {
      w.f3_error = err.what();
    }
    r.witnesses.push_back(std::move(w));
  }
  return r;
}

std::string closure_json(const ClosureReport& r) {
  json ws = json::array();
  for (const auto& w : r.witnesses) {
    json item{{"eps", w.eps}};
    auto side = [&](const char* key, const std::string& err, const ComplexMatrix& m, const std::string& cls) {
      item[key] = err.empty() ? json{{"matrix", matrix(m)}, {"class", cls}} : json{{"error", err}};
    };
    side("e3", w.e3_error, w.e3, w.e3_class);
    side("f3", w.f3_error, w.f3, w.f3_class);
    ws.push_back(std::move(item));
  }
  return dump({{"in_closure_E3", r.in_closure_E3}, {"in_closure_F3", r.in_closure_F3}, {"witnesses", std::move(ws)}});
}

std::string inference_json(const InferenceResult& r) {
  return dump({{"rho", matrix(r.rho.matrix())},
               {"entropy", r.entropy},
               {"multipliers", json::array({r.u, r.v})},
               {"residual", r.residual},
               {"iterations", r.iterations}});
}

std::string probe_json(const ProbeReport& r) {
  auto path = [](const std::vector<ProbeSample>& s) {
    json out = json::array();
    for (const auto& p : s) out.push_back({{"delta", p.delta}, {"point", point(p.point)}, {"entropy", p.entropy}});
    return out;
  };
  return dump({{"alpha", point(r.alpha)},
               {"value", r.value},
               {"radial", path(r.radial)},
               {"boundary", path(r.boundary)},
               {"radial_limit", r.radial_limit},
               {"boundary_limit", r.boundary_limit},
               {"discontinuous", r.discontinuous}});
}

}  // namespace numrange
