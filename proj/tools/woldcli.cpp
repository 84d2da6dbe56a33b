// woldcli: verify / decompose / wold / zoo subcommands over tuple files.
// Exit codes: 0 pass, 1 mathematical failure, 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "woldkit/report.hpp"

using namespace woldkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ToleranceProfile base_tolerance() {
  ToleranceProfile tol;
  // Documented override: WOLDKIT_RESIDUAL_TOL, read once at startup.
  if (const char* env = std::getenv("WOLDKIT_RESIDUAL_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0.0) tol.residual_tol = v;
  }
  return tol;
}

void emit(const Json& report, const std::string& out_path, const std::string& format) {
  if (!out_path.empty()) {
    if (format == "text") {
      std::ofstream f(out_path);
      if (!f) throw Error("cannot write " + out_path);
      f << report_text_summary(report);
    } else {
      save_json(out_path, report);
    }
  }
  std::cout << report_text_summary(report);
}

Json basis_json(const Matrix& columns) {
  Json cols = Json::array();
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Json col = Json::array();
    for (Eigen::Index r = 0; r < columns.rows(); ++r)
      col.push_back(complex_json(columns(r, c)));
    cols.push_back(std::move(col));
  }
  return cols;
}

int run(int argc, char** argv) {
  CLI::App app{"woldkit: Wold-type decompositions for twisted contraction tuples"};
  app.require_subcommand(1);

  ToleranceProfile tol = base_tolerance();
  double tol_flag = 0.0;
  bool canonical = false;
  std::string out_path, format = "json";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", tol_flag, "residual tolerance override");
    cmd->add_flag("--canonical", canonical, "omit timestamp (golden-comparable output)");
    cmd->add_option("--out", out_path, "report output path");
    cmd->add_option("--format", format, "report format: json|text")
        ->check(CLI::IsMember({"json", "text"}));
  };

  std::string path;
  int window = 8;
  std::int64_t step_cap = -1;
  int m_cap = -1;
  bool audit = false, parallel = false, oracle = false;

  CLI::App* verify = app.add_subcommand("verify", "check the twisted-tuple relations");
  verify->add_option("path", path, "tuple file")->required();
  verify->add_option("--window", window, "lattice check window");
  add_common(verify);

  CLI::App* dec = app.add_subcommand("decompose", "compute the 2^n slice decomposition");
  dec->add_option("path", path, "tuple file")->required();
  dec->add_option("--m-cap", m_cap, "power cap for the formula cross-check");
  dec->add_option("--window", window, "densification window for lattice inputs");
  dec->add_flag("--audit", audit, "proceed despite relation failures");
  dec->add_flag("--parallel", parallel, "parallel slice processing");
  add_common(dec);

  CLI::App* wold = app.add_subcommand("wold", "classify lattice indices per the shift formulas");
  wold->add_option("path", path, "lattice tuple file")->required();
  wold->add_option("--window", window, "classification window");
  wold->add_option("--step-cap", step_cap, "backward-orbit step cap");
  wold->add_flag("--oracle", oracle, "compare against the dense decomposition");
  add_common(wold);

  CLI::App* zoo = app.add_subcommand("zoo", "write a model tuple file");
  std::string name;
  double r_theta = 0.0, theta = 0.0, alpha = 0.5, a1 = 1.0, a2 = 1.0, s1 = 0.5, s2 = 0.7;
  int d = 3, dim = 8, unitary_dim = 3, n = 2;
  std::uint64_t seed = 1;
  std::vector<int> dims;
  bool bilateral = false;
  zoo->add_option("name", name,
                  "hardy-ar | hardy-du | counterexample-br | clock-shift | clock-mixed | "
                  "planted | single")
      ->required();
  zoo->add_option("--r-theta", r_theta, "argument of the unimodular r");
  zoo->add_option("--theta", theta, "D[U] phase");
  zoo->add_option("--alpha", alpha, "hardy-ar alpha");
  zoo->add_option("--a1", a1, "hardy-du alpha_1");
  zoo->add_option("--a2", a2, "hardy-du alpha_2");
  zoo->add_flag("--bilateral", bilateral, "hardy-du bilateral-shift mode");
  zoo->add_option("--d", d, "clock dimension");
  zoo->add_option("--s1", s1, "clock scale 1");
  zoo->add_option("--s2", s2, "clock scale 2");
  zoo->add_option("--n", n, "planted tuple length");
  zoo->add_option("--dims", dims, "planted block dims in label mask order");
  zoo->add_option("--dim", dim, "single-contraction dimension");
  zoo->add_option("--unitary-dim", unitary_dim, "single-contraction planted H_u dim");
  zoo->add_option("--seed", seed, "rng seed");
  add_common(zoo);

  CLI11_PARSE(app, argc, argv);
  if (tol_flag > 0.0) tol.residual_tol = tol_flag;

  if (*verify) {
    LoadedTuple in = load_tuple_file(path);
    in.tol.residual_tol = tol.residual_tol;
    ReportMeta meta{fnv1a_hex(slurp(path)), canonical};
    Json rep = verify_report(in, meta, window);
    emit(rep, out_path, format);
    return rep["pass"].get<bool>() ? 0 : 1;
  }

  if (*dec) {
    LoadedTuple in = load_tuple_file(path);
    in.tol.residual_tol = tol.residual_tol;
    ReportMeta meta{fnv1a_hex(slurp(path)), canonical};
    TwistedTuple t;
    if (in.kind == LoadedTuple::Kind::Dense) {
      t = make_twisted_tuple(in.ops, in.twist, in.tol, TupleMode::Audit);
    } else {
      Densified dd = densify(in.lattice, window);
      t = densified_tuple(dd, in.tol);
    }
    if (!audit && !t.report.pass) {
      std::cerr << "tuple fails verification: " << t.report.first_failure << "\n";
      return 1;
    }
    DecompositionResult r = decompose(t, parallel);
    Json rep = decomposition_report(t, r, meta);
    emit(rep, out_path, format);
    return rep["relations"]["pass"].get<bool>() &&
                   rep["diagnostics"]["restrictions_pass"].get<bool>()
               ? 0
               : 1;
  }

  if (*wold) {
    LoadedTuple in = load_tuple_file(path);
    if (in.kind != LoadedTuple::Kind::Lattice)
      throw Error("wold: input must be a lattice tuple file");
    ReportMeta meta{fnv1a_hex(slurp(path)), canonical};
    Json rep;
    try {
      rep = wold_report(in.lattice, window, step_cap, oracle, meta);
    } catch (const NotAnIsometry& e) {
      std::cerr << e.what() << "\n";
      return 1;
    }
    emit(rep, out_path, format);
    return rep["pass"].get<bool>() ? 0 : 1;
  }

  // zoo
  if (out_path.empty()) throw Error("zoo: --out is required");
  Json file;
  if (name == "hardy-ar") {
    HardyArModel m = hardy_pair_Ar(std::polar(1.0, r_theta), alpha, window);
    file = lattice_tuple_json(m.lattice);
  } else if (name == "hardy-du") {
    file = lattice_tuple_json(
        hardy_pair_DU(a1, a2, bilateral ? DUMode::Bilateral : DUMode::Phase, theta));
  } else if (name == "counterexample-br") {
    file = lattice_tuple_json(counterexample_Br(std::polar(1.0, r_theta)));
  } else if (name == "clock-shift") {
    TwistedTuple t = clock_shift_tuple(d, s1, s2, tol);
    file = dense_tuple_json(t.ops, t.twist, tol);
  } else if (name == "clock-mixed") {
    TwistedTuple t = clock_shift_mixed(d, s1, s2, tol);
    file = dense_tuple_json(t.ops, t.twist, tol);
  } else if (name == "planted") {
    PlantedSpec spec;
    spec.n = n;
    spec.seed = seed;
    if (dims.empty()) dims.assign(1u << n, 2);
    if (dims.size() != (1u << n)) throw Error("zoo planted: --dims needs 2^n entries");
    for (unsigned mask = 0; mask < dims.size(); ++mask)
      if (dims[mask] > 0) spec.blocks.push_back({mask, dims[mask], {}});
    Planted p = planted_tuple(spec, tol);
    file = dense_tuple_json(p.tuple.ops, p.tuple.twist, tol);
    Json truth;
    truth["format_version"] = kFormatVersion;
    truth["kind"] = "ground-truth";
    truth["seed"] = seed;
    Json slices = Json::array();
    for (const auto& [mask, basis] : p.truth)
      slices.push_back({{"label", SliceLabel{n, mask}.to_string()},
                        {"dim", basis.dim()},
                        {"basis_columns", basis_json(basis.columns)}});
    truth["slices"] = std::move(slices);
    save_json(out_path + ".truth.json", truth);
  } else if (name == "single") {
    PlantedContraction pc = planted_contraction(dim, unitary_dim, seed, tol);
    TwistFamily f;
    f.n = 1;
    f.dim = dim;
    file = dense_tuple_json({pc.op}, f, tol);
  } else {
    throw Error("zoo: unknown model '" + name + "'");
  }
  save_json(out_path, file);
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const NotAContraction& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const NotAnIsometry& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
