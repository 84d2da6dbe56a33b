#include "woldkit/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace woldkit {

double round_sig(double v) {
  if (!std::isfinite(v)) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Json complex_json(Complex v) { return Json::array({round_sig(v.real()), round_sig(v.imag())}); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

Complex read_complex(const Json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(std::string("tuple file: ") + where + ": complex values are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix read_matrix(const Json& j, int dim, const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim * dim)
    throw Error(std::string("tuple file: ") + where + ": expected row-major length dim*dim");
  Matrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = read_complex(j[r * dim + c], where);
  return m;
}

Json write_matrix(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_json(m(r, c)));
  return out;
}

MonomialOperator read_monomial(const Json& j, const LatticeShape& shape, const char* where) {
  const int d = shape.dims();
  MonomialOperator op;
  op.shape = shape;
  const Json& sig = j.at("sigma");
  if (!sig.is_array() || static_cast<int>(sig.size()) != d)
    throw Error(std::string("tuple file: ") + where + ": sigma must be dims x dims");
  for (const auto& row : sig) {
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw Error(std::string("tuple file: ") + where + ": sigma must be dims x dims");
    op.sigma_mat.push_back(row.get<std::vector<std::int64_t>>());
  }
  op.sigma_off = j.at("offset").get<std::vector<std::int64_t>>();
  if (static_cast<int>(op.sigma_off.size()) != d)
    throw Error(std::string("tuple file: ") + where + ": offset length mismatch");
  const Json& w = j.at("weight");
  op.weight.scalar = read_complex(w.at("scalar"), where);
  if (w.contains("factors"))
    for (const auto& fj : w.at("factors")) {
      WeightFactor f;
      f.base = read_complex(fj.at("base"), where);
      f.lin = fj.at("lin").get<std::vector<std::int64_t>>();
      f.off = fj.value("off", std::int64_t{0});
      op.weight.factors.push_back(std::move(f));
    }
  op.isometric = j.value("isometric", false);
  op.validate();
  return op;
}

Json write_monomial(const MonomialOperator& op) {
  Json j;
  j["sigma"] = op.sigma_mat;
  j["offset"] = op.sigma_off;
  Json w;
  w["scalar"] = complex_json(op.weight.scalar);
  Json factors = Json::array();
  for (const auto& f : op.weight.factors) {
    Json fj;
    fj["base"] = complex_json(f.base);
    fj["lin"] = f.lin;
    fj["off"] = f.off;
    factors.push_back(std::move(fj));
  }
  w["factors"] = std::move(factors);
  j["weight"] = std::move(w);
  j["isometric"] = op.isometric;
  return j;
}

ToleranceProfile read_tol(const Json& j) {
  ToleranceProfile tol;
  if (j.contains("tolerance")) {
    const Json& t = j.at("tolerance");
    tol.rank_rtol = t.value("rank_rtol", tol.rank_rtol);
    tol.residual_tol = t.value("residual_tol", tol.residual_tol);
    tol.stabilization_window = t.value("stabilization_window", tol.stabilization_window);
  }
  tol.validate();
  return tol;
}

std::pair<int, int> read_pair_key(const Json& j, int n) {
  int i = j.at("i").get<int>();
  int jj = j.at("j").get<int>();
  if (i < 1 || jj <= i || jj > n) throw Error("tuple file: twist entry needs 1 <= i < j <= n");
  return {i, jj};
}

}  // namespace

LoadedTuple parse_tuple_json(const Json& j) {
  LoadedTuple out;
  if (j.value("format_version", 0) != kFormatVersion)
    throw Error("tuple file: unsupported format_version");
  out.tol = read_tol(j);
  std::string kind = j.value("kind", "");
  if (kind != "dense" && kind != "lattice")
    throw Error("tuple file: kind must be \"dense\" or \"lattice\"");
  const Json& ops = j.at("operators");
  if (!ops.is_array() || ops.empty()) throw Error("tuple file: operators must be non-empty");
  const int n = static_cast<int>(ops.size());

  if (kind == "dense") {
    out.kind = LoadedTuple::Kind::Dense;
    int dim = j.at("dim").get<int>();
    if (dim < 1) throw Error("tuple file: dim must be >= 1");
    for (int i = 0; i < n; ++i)
      out.ops.push_back(read_matrix(ops[i], dim, "operators"));
    out.twist.n = n;
    out.twist.dim = dim;
    for (int i = 1; i <= n; ++i)
      for (int jj = i + 1; jj <= n; ++jj)
        out.twist.units[{i, jj}] = Matrix::Identity(dim, dim);
    if (j.contains("twist"))
      for (const auto& tj : j.at("twist"))
        out.twist.units[read_pair_key(tj, n)] = read_matrix(tj.at("entries"), dim, "twist");
  } else if (kind == "lattice") {
    out.kind = LoadedTuple::Kind::Lattice;
    const Json& sh = j.at("shape");
    out.lattice.shape.unilateral = sh.at("unilateral").get<int>();
    out.lattice.shape.bilateral = sh.value("bilateral", 0);
    if (out.lattice.shape.unilateral < 0 || out.lattice.shape.bilateral < 0 ||
        out.lattice.shape.dims() < 1)
      throw Error("tuple file: bad lattice shape");
    for (int i = 0; i < n; ++i)
      out.lattice.ops.push_back(read_monomial(ops[i], out.lattice.shape, "operators"));
    if (j.contains("twist"))
      for (const auto& tj : j.at("twist"))
        out.lattice.twists[read_pair_key(tj, n)] =
            read_monomial(tj, out.lattice.shape, "twist");
    for (int i = 1; i <= n; ++i)
      for (int jj = i + 1; jj <= n; ++jj)
        if (!out.lattice.twists.count({i, jj}))
          out.lattice.twists[{i, jj}] = MonomialOperator::identity(out.lattice.shape);
    out.lattice.validate();
  } else {
    throw Error("tuple file: kind must be \"dense\" or \"lattice\"");
  }
  return out;
}

LoadedTuple load_tuple_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse error in " + path + ": " + e.what());
  }
  try {
    return parse_tuple_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed tuple file " + path + ": " + e.what());
  }
}

namespace {

Json tol_json(const ToleranceProfile& tol) {
  Json t;
  t["rank_rtol"] = round_sig(tol.rank_rtol);
  t["residual_tol"] = round_sig(tol.residual_tol);
  t["stabilization_window"] = tol.stabilization_window;
  return t;
}

}  // namespace

Json dense_tuple_json(const std::vector<Matrix>& ops, const TwistFamily& twist,
                      const std::optional<ToleranceProfile>& tol) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "dense";
  j["dim"] = twist.dim;
  Json jops = Json::array();
  for (const auto& t : ops) jops.push_back(write_matrix(t));
  j["operators"] = std::move(jops);
  Json jt = Json::array();
  for (const auto& [key, u] : twist.units) {
    Json e;
    e["i"] = key.first;
    e["j"] = key.second;
    e["entries"] = write_matrix(u);
    jt.push_back(std::move(e));
  }
  j["twist"] = std::move(jt);
  if (tol) j["tolerance"] = tol_json(*tol);
  return j;
}

Json lattice_tuple_json(const LatticeTuple& t, const std::optional<ToleranceProfile>& tol) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "lattice";
  j["shape"] = {{"unilateral", t.shape.unilateral}, {"bilateral", t.shape.bilateral}};
  Json jops = Json::array();
  for (const auto& op : t.ops) jops.push_back(write_monomial(op));
  j["operators"] = std::move(jops);
  Json jt = Json::array();
  for (const auto& [key, u] : t.twists) {
    Json e = write_monomial(u);
    Json withkey;
    withkey["i"] = key.first;
    withkey["j"] = key.second;
    for (auto& [k, v] : e.items()) withkey[k] = v;
    jt.push_back(std::move(withkey));
  }
  j["twist"] = std::move(jt);
  if (tol) j["tolerance"] = tol_json(*tol);
  return j;
}

void save_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << "\n";
}

Json relation_report_json(const RelationReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["max_residual"] = round_sig(rep.max_residual);
  j["first_failure"] = rep.first_failure;
  j["twist_unitarity_residual"] = round_sig(rep.twist.max_unitarity_residual);
  j["twist_commutation_residual"] = round_sig(rep.twist.max_commutation_residual);
  Json contr = Json::array();
  for (double r : rep.contraction_residuals) contr.push_back(round_sig(r));
  j["contraction_residuals"] = std::move(contr);
  Json pairs = Json::array();
  for (const auto& p : rep.pairs)
    pairs.push_back({{"i", p.i},
                     {"j", p.j},
                     {"forward", round_sig(p.forward)},
                     {"adjoint", round_sig(p.adjoint_rel)}});
  j["pairs"] = std::move(pairs);
  Json tc = Json::array();
  for (const auto& c : rep.twist_commute)
    tc.push_back({{"k", c.k}, {"i", c.i}, {"j", c.j}, {"residual", round_sig(c.value)}});
  j["twist_commute"] = std::move(tc);
  return j;
}

Json lattice_relation_report_json(const LatticeRelationReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["forward_pass"] = rep.forward_pass;
  j["adjoint_pass"] = rep.adjoint_pass;
  j["twist_commute_pass"] = rep.twist_commute_pass;
  j["max_residual"] = round_sig(rep.max_residual);
  j["max_forward_residual"] = round_sig(rep.max_forward_residual);
  j["max_adjoint_residual"] = round_sig(rep.max_adjoint_residual);
  j["checked_indices"] = rep.checked_indices;
  if (rep.first_failure) {
    const auto& f = *rep.first_failure;
    j["first_failure"] = {{"i", f.i},
                          {"j", f.j},
                          {"relation", f.relation},
                          {"index", f.index},
                          {"residual", round_sig(f.residual)}};
  } else {
    j["first_failure"] = nullptr;
  }
  return j;
}

namespace {

Json meta_json(const ReportMeta& meta) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["input_digest"] = meta.input_digest;
  if (!meta.canonical) {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  return j;
}

}  // namespace

Json verify_report(const LoadedTuple& in, const ReportMeta& meta, int window) {
  Json j = meta_json(meta);
  if (in.kind == LoadedTuple::Kind::Dense) {
    j["kind"] = "dense";
    RelationReport rep = verify_relations(in.ops, in.twist, in.tol);
    j["relations"] = relation_report_json(rep);
    j["pass"] = rep.pass;
  } else {
    j["kind"] = "lattice";
    j["window"] = window;
    LatticeRelationReport rep = verify_lattice_relations(in.lattice, window);
    j["relations"] = lattice_relation_report_json(rep);
    j["pass"] = rep.pass;
  }
  return j;
}

Json decomposition_report(const TwistedTuple& t, const DecompositionResult& r,
                          const ReportMeta& meta) {
  Json j = meta_json(meta);
  j["kind"] = "decomposition";
  j["n"] = r.n;
  j["dim"] = r.ambient_dim;
  j["relations"] = relation_report_json(t.report);

  Json slices = Json::array();
  for (const auto& s : r.slices) {
    Json sj;
    sj["label"] = s.label.to_string();
    sj["dim"] = s.space.dim();
    sj["off_residual"] = round_sig(s.max_off_residual);
    Json coords = Json::array();
    for (const auto& c : s.classification) {
      Json cj;
      cj["coord"] = c.coord;
      cj["expect"] = c.expect_unitary ? "unitary" : "cnu";
      if (c.expect_unitary)
        cj["unitary_residual"] = round_sig(c.unitary_residual);
      else
        cj["residual_unitary_dim"] = c.residual_unitary_dim;
      coords.push_back(std::move(cj));
    }
    sj["coordinates"] = std::move(coords);
    slices.push_back(std::move(sj));
  }
  j["slices"] = std::move(slices);

  Json d;
  d["completeness_residual"] = round_sig(r.completeness_residual);
  d["max_cross_inner"] = round_sig(r.max_cross_inner);
  d["max_off_residual"] = round_sig(r.max_off_residual);
  RestrictionClassReport rc = classify_restrictions(t, r, t.tol);
  d["restrictions_pass"] = rc.pass;
  d["max_unitary_residual"] = round_sig(rc.max_unitary_residual);
  d["max_residual_unitary_dim"] = rc.max_residual_unitary_dim;
  if (r.n == 2) {
    auto formula = pair_formula_subspaces(t);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k)
      worst = std::max(worst, max_principal_angle(formula[k], r.slices[k].space));
    d["pair_formula_max_angle"] = round_sig(worst);
  }
  j["pass"] = t.report.pass && rc.pass;
  j["diagnostics"] = std::move(d);
  return j;
}

OracleAgreement lattice_dense_oracle(const LatticeTuple& t, int window, int margin,
                                     std::int64_t step_cap) {
  if (step_cap < 0) step_cap = 4 * static_cast<std::int64_t>(window);
  Densified d = densify(t, window, margin);
  TwistedTuple dense = densified_tuple(d);
  DecompositionResult r = decompose(dense);

  OracleAgreement out;
  for (std::int64_t f = 0; f < d.window.size(); ++f) {
    if (!d.interior[f]) continue;
    ++out.interior;
    auto cls = classify_index(t, d.window.at(f), step_cap);
    if (!cls.decided) continue;

    // Dense membership: slice whose projector carries the basis vector.
    unsigned best = 0;
    double best_norm = -1.0;
    for (const auto& s : r.slices) {
      double nrm = s.space.dim() == 0
                       ? 0.0
                       : (s.space.columns.adjoint() *
                          Matrix::Identity(d.window.size(), d.window.size()).col(f))
                             .norm();
      if (nrm > best_norm) {
        best_norm = nrm;
        best = s.label.mask;
      }
    }
    if (best == cls.label.mask) ++out.agree;
  }
  out.pct = out.interior == 0 ? 0.0 : 100.0 * out.agree / out.interior;
  return out;
}

Json wold_report(const LatticeTuple& t, int window, std::int64_t step_cap, bool with_oracle,
                 const ReportMeta& meta) {
  for (const auto& op : t.ops)
    if (!op.isometric) throw NotAnIsometry("wold_report: lattice tuple must be isometric");
  if (step_cap < 0) step_cap = 4 * static_cast<std::int64_t>(window);
  Json j = meta_json(meta);
  j["kind"] = "lattice-wold";
  j["shape"] = {{"unilateral", t.shape.unilateral}, {"bilateral", t.shape.bilateral}};
  j["window"] = window;
  j["step_cap"] = step_cap;
  j["relations"] = lattice_relation_report_json(verify_lattice_relations(t, window));

  SliceCounts counts = slice_dimensions(t, window, step_cap);
  Json cj;
  for (const auto& [mask, c] : counts.counts) cj[SliceLabel{t.n(), mask}.to_string()] = c;
  j["slice_counts"] = std::move(cj);
  j["window_size"] = counts.window_size;
  j["undecided"] = counts.undecided;
  j["boundary"] = counts.boundary;

  LatticeWindow w{t.shape, window};
  Json idx = Json::array();
  for (std::int64_t f = 0; f < w.size(); ++f) {
    auto cls = classify_index(t, w.at(f), step_cap);
    Json e;
    e["index"] = cls.index;
    e["label"] = cls.label.to_string();
    e["decided"] = cls.decided;
    e["residue"] = cls.residue;
    idx.push_back(std::move(e));
  }
  j["indices"] = std::move(idx);

  // Bilateral dims never strip; report them as unitary directions.
  Json bd = Json::array();
  for (int i = t.shape.unilateral; i < t.shape.dims(); ++i) bd.push_back(i);
  j["unitary_directions"] = std::move(bd);

  if (with_oracle) {
    OracleAgreement oa = lattice_dense_oracle(t, window, 3, step_cap);
    j["oracle"] = {{"interior_indices", oa.interior},
                   {"agreeing", oa.agree},
                   {"agreement_pct", round_sig(oa.pct)}};
  }
  j["pass"] = j["relations"]["pass"].get<bool>() && counts.undecided.empty();
  return j;
}

std::string report_text_summary(const Json& report) {
  std::ostringstream os;
  os << report.value("tool", "woldkit") << " " << report.value("version", "")
     << " report kind=" << report.value("kind", "?") << "\n";
  if (report.contains("relations")) {
    const Json& rel = report["relations"];
    os << "relations: " << (rel["pass"].get<bool>() ? "pass" : "FAIL") << " (max residual "
       << rel["max_residual"].dump() << ")\n";
    if (rel.contains("first_failure") && rel["first_failure"].is_object()) {
      const Json& f = rel["first_failure"];
      os << "first failure: " << f.value("relation", "?") << " relation at index "
         << f["index"].dump() << " (i=" << f["i"].dump() << ", j=" << f["j"].dump() << ")\n";
    } else if (rel.contains("first_failure") && rel["first_failure"].is_string() &&
               !rel["first_failure"].get<std::string>().empty()) {
      os << "first failure: " << rel["first_failure"].get<std::string>() << "\n";
    }
  }
  if (report.contains("slices"))
    for (const auto& s : report["slices"])
      os << "slice " << s["label"].get<std::string>() << " dim " << s["dim"].dump() << "\n";
  if (report.contains("slice_counts"))
    for (const auto& [k, v] : report["slice_counts"].items())
      os << "slice " << k << " count " << v.dump() << "\n";
  if (report.contains("pass"))
    os << "overall: " << (report["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
  return os.str();
}

}  // namespace woldkit
