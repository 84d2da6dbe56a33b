// Acceptance harness: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "woldkit/report.hpp"
#include "woldkit/zoo.hpp"

using namespace woldkit;

namespace {

int g_failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion(int number, const std::string& title, const std::function<void()>& body) {
  try {
    body();
    std::cout << "PASS [PRIMARY] criterion " << number << ": " << title << "\n";
  } catch (const std::exception& e) {
    ++g_failures;
    std::cout << "FAIL [PRIMARY] criterion " << number << ": " << title << " -- " << e.what()
              << "\n";
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::runtime_error(what);
}

std::string tmp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

struct CliResult {
  int exit_code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  std::string cmd = std::string(WOLDCLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  require(pipe != nullptr, "popen failed");
  CliResult r;
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.output.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

double truth_angle(const DecompositionResult& r, const std::map<unsigned, SubspaceBasis>& truth) {
  double worst = 0.0;
  for (const auto& s : r.slices) {
    auto it = truth.find(s.label.mask);
    if (it == truth.end()) {
      require(s.space.dim() == 0, "unplanted slice " + s.label.to_string() + " is nonempty");
      continue;
    }
    require(s.space.dim() == it->second.dim(),
            "slice " + s.label.to_string() + " dimension mismatch");
    worst = std::max(worst, max_principal_angle(s.space, it->second));
  }
  return worst;
}

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  HardyArModel ar = hardy_pair_Ar(std::polar(1.0, 0.9), 0.5, 12);
  require(ar.pair.report.pass && ar.pair.report.max_residual <= 1e-10,
          "Example 3.4 pair residual");
  require(ar.doubled.report.pass && ar.doubled.report.max_residual <= 1e-10,
          "Example 3.4 doubled residual");
  LatticeTuple du = hardy_pair_DU(1.0, 1.0, DUMode::Phase, 2.0 * std::numbers::pi / 5);
  TwistedTuple dud = densified_tuple(densify(du, 12));
  require(dud.report.pass && dud.report.max_residual <= 1e-10, "Example 3.5 residual");
  double dt = seconds_since(t0);
  require(dt < 5.0, "runtime " + std::to_string(dt) + "s exceeds 5s");
}

void criterion_2() {
  std::string in = tmp_file("woldkit_acc_br.json");
  std::string out = tmp_file("woldkit_acc_br_report.json");
  save_json(in, lattice_tuple_json(counterexample_Br(std::polar(1.0, 0.4))));
  CliResult r = run_cli("verify " + in + " --window 6 --canonical --out " + out);
  require(r.exit_code == 1, "verify exit code " + std::to_string(r.exit_code) + ", want 1");
  require(r.output.find("adjoint") != std::string::npos, "CLI output does not name adjoint");
  Json rep = Json::parse(slurp(out));
  const Json& f = rep["relations"]["first_failure"];
  require(f["relation"].get<std::string>() == "adjoint", "first failure not adjoint");
  require(f["index"][0].get<std::int64_t>() == 0, "failure not on the m1=0 fiber");
  require(rep["relations"]["max_forward_residual"].get<double>() == 0.0,
          "forward residual not exactly 0");
  std::remove(in.c_str());
  std::remove(out.c_str());
}

void criterion_3() {
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    int dim = 4 + static_cast<int>(seed % 13);        // 4..16
    int udim = static_cast<int>(seed % (dim + 1));    // 0..dim
    PlantedContraction pc = planted_contraction(dim, udim, seed);
    SubspaceBasis fixed = unitary_part(pc.op);
    require(fixed.dim() == udim, "seed " + std::to_string(seed) + ": H_u dim mismatch");
    require(max_principal_angle(fixed, pc.unitary_space) <= 1e-8,
            "seed " + std::to_string(seed) + ": planted angle");
    SubspaceBasis chain = chain_unitary_part(pc.op, {}, 2 * dim);
    require(chain.dim() == udim &&
                max_principal_angle(chain, fixed) <= 1e-8,
            "seed " + std::to_string(seed) + ": chain formula disagrees");
  }
  double dt = seconds_since(t0);
  require(dt < 30.0, "runtime " + std::to_string(dt) + "s exceeds 30s");
}

PlantedSpec seeded_spec(std::uint64_t seed) {
  PlantedSpec spec;
  spec.seed = seed;
  spec.n = (seed % 2 == 0) ? 2 : 3;
  unsigned nslices = 1u << spec.n;
  for (unsigned mask = 0; mask < nslices; ++mask) {
    int dim = 1 + static_cast<int>((seed + mask) % (spec.n == 2 ? 4 : 2));
    spec.blocks.push_back({mask, dim, {}});
  }
  return spec;
}

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    PlantedSpec spec = seeded_spec(seed);
    require(spec.total_dim() <= 24, "spec dimension budget");
    Planted p = planted_tuple(spec);
    DecompositionResult r = decompose(p.tuple);
    int total = 0;
    for (const auto& s : r.slices) total += s.space.dim();
    require(total == p.tuple.dim(), "slice dims do not sum to ambient");
    require(r.max_cross_inner <= 1e-8, "cross-slice inner products");
    require(r.max_off_residual <= 1e-8, "off-reducing residual");
    RestrictionClassReport rc = classify_restrictions(p.tuple, r, p.tuple.tol);
    require(rc.pass && rc.max_residual_unitary_dim == 0,
            "c.n.u. slice re-decomposition at seed " + std::to_string(seed));
    require(truth_angle(r, p.truth) <= 1e-8,
            "ground-truth angle at seed " + std::to_string(seed));
  }
  double dt = seconds_since(t0);
  require(dt < 60.0, "runtime " + std::to_string(dt) + "s exceeds 60s");
}

void criterion_5() {
  std::vector<TwistedTuple> corpus;
  corpus.push_back(clock_shift_tuple(3, 0.5, 0.7));
  corpus.push_back(clock_shift_tuple(4, std::polar(1.0, 0.3), 0.8));
  corpus.push_back(clock_shift_tuple(2, std::polar(1.0, 0.1), 1.0));
  corpus.push_back(clock_shift_mixed(3, 0.5, 0.7));
  corpus.push_back(clock_shift_mixed(4, 0.3, 0.6));
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    PlantedSpec spec;
    spec.n = 2;
    spec.seed = seed;
    spec.blocks = {{0u, 2, {}}, {1u, 2, {}}, {2u, 2, {}}, {3u, 2, {}}};
    corpus.push_back(planted_tuple(spec).tuple);
  }
  Matrix u1 = Matrix::Zero(3, 3), u2 = Matrix::Zero(3, 3);
  u1.diagonal() << std::polar(1.0, 0.1), std::polar(1.0, 0.5), std::polar(1.0, 2.0);
  u2.diagonal() << std::polar(1.0, 1.3), 0.5, std::polar(1.0, 0.4);
  corpus.push_back(make_twisted_tuple({u1, u2}, TwistFamily::identity_family(2, 3)));

  for (std::size_t k = 0; k < corpus.size(); ++k) {
    DecompositionResult r = decompose(corpus[k]);
    auto formula = pair_formula_subspaces(corpus[k]);
    for (int s = 0; s < 4; ++s) {
      require(formula[s].dim() == r.slices[s].space.dim(),
              "instance " + std::to_string(k) + ": formula dim mismatch");
      require(max_principal_angle(formula[s], r.slices[s].space) <= 1e-8,
              "instance " + std::to_string(k) + ": formula angle");
    }
  }
}

void criterion_6() {
  for (auto mode : {DUMode::Phase, DUMode::Bilateral}) {
    LatticeTuple du = hardy_pair_DU(1.0, 1.0, mode, 2.0 * std::numbers::pi / 5);
    OracleAgreement oa = lattice_dense_oracle(du, 10, 3);
    require(oa.interior > 0, "no interior indices");
    require(oa.agree == oa.interior,
            std::string(mode == DUMode::Phase ? "phase" : "bilateral") + " mode: " +
                std::to_string(oa.agree) + "/" + std::to_string(oa.interior) + " agree");
  }
}

void criterion_7() {
  std::vector<LatticeTuple> configs;
  configs.push_back(hardy_pair_DU(1.0, 1.0, DUMode::Phase, 0.0));
  configs.push_back(hardy_pair_DU(1.0, 1.0, DUMode::Phase, 2.0 * std::numbers::pi / 5));
  configs.push_back(hardy_pair_DU(1.0, 1.0, DUMode::Phase, 1.0));
  configs.push_back(hardy_pair_DU(1.0, 1.0, DUMode::Phase, std::numbers::pi / 2));
  configs.push_back(hardy_pair_DU(1.0, 1.0, DUMode::Bilateral));
  for (std::size_t k = 0; k < configs.size(); ++k) {
    const LatticeTuple& t = configs[k];
    int window = t.shape.dims() > 2 ? 4 : 6;
    LatticeWindow w{t.shape, window};
    auto sets = pair_isometry_index_sets(t, window);
    std::int64_t covered = 0;
    for (const auto& [mask, indices] : sets) {
      covered += static_cast<std::int64_t>(indices.size());
      for (const auto& m : indices) {
        auto cls = classify_index(t, m, 4 * window);
        require(cls.decided && cls.label.mask == mask,
                "config " + std::to_string(k) + ": formula/classify mismatch");
      }
    }
    require(covered == w.size(), "config " + std::to_string(k) + ": incomplete cover");
  }
}

void criterion_8() {
  std::vector<std::pair<TwistedTuple, const Matrix*>> corpus;
  corpus.emplace_back(clock_shift_tuple(3, 0.5, 0.7), nullptr);
  corpus.emplace_back(clock_shift_tuple(4, std::polar(1.0, 0.3), 0.8), nullptr);
  corpus.emplace_back(clock_shift_mixed(3, 0.5, 0.7), nullptr);
  PlantedSpec spec;
  spec.n = 2;
  spec.seed = 5;
  spec.blocks = {{0u, 2, {}}, {1u, 2, {}}, {2u, 2, {}}, {3u, 2, {}}};
  corpus.emplace_back(planted_tuple(spec).tuple, nullptr);
  HardyArModel ar = hardy_pair_Ar(std::polar(1.0, 0.9), 0.5, 12);
  Densified ard = densify(ar.lattice, 12, 7);
  TwistedTuple art = densified_tuple(ard);
  corpus.emplace_back(art, &ard.interior_projector);

  for (std::size_t k = 0; k < corpus.size(); ++k)
    for (int l = 0; l <= 3; ++l)
      for (int m = 0; m <= 3; ++m) {
        double worst = max_commutation_residual(
            lemma_commutation_report(corpus[k].first, l, m, corpus[k].second));
        require(worst <= 1e-10, "corpus " + std::to_string(k) + " (l=" + std::to_string(l) +
                                    ",m=" + std::to_string(m) + "): residual " +
                                    std::to_string(worst));
      }

  LatticeTuple br = counterexample_Br(std::polar(1.0, 0.4));
  Densified brd = densify(br, 8);
  TwistedTuple brt = densified_tuple(brd);
  double violation = 0.0;
  for (int l = 0; l <= 3; ++l)
    for (int m = 0; m <= 3; ++m)
      violation = std::max(violation,
                           max_commutation_residual(lemma_commutation_report(
                               brt, l, m, &brd.interior_projector)));
  require(violation > 1e-3, "Example 3.6 did not violate the lemma");
}

void criterion_9() {
  std::string in = tmp_file("woldkit_acc_planted.json");
  std::string r1 = tmp_file("woldkit_acc_rep1.json");
  std::string r2 = tmp_file("woldkit_acc_rep2.json");
  std::string r3 = tmp_file("woldkit_acc_rep3.json");
  PlantedSpec spec;
  spec.n = 3;
  spec.seed = 2026;
  for (unsigned mask = 0; mask < 8; ++mask) spec.blocks.push_back({mask, 2, {}});
  Planted p = planted_tuple(spec);
  save_json(in, dense_tuple_json(p.tuple.ops, p.tuple.twist, p.tuple.tol));

  CliResult a = run_cli("decompose " + in + " --canonical --out " + r1);
  CliResult b = run_cli("decompose " + in + " --canonical --parallel --out " + r2);
  CliResult c = run_cli("decompose " + in + " --canonical --out " + r3);
  require(a.exit_code == 0 && b.exit_code == 0 && c.exit_code == 0, "decompose exit codes");
  std::string s1 = slurp(r1), s2 = slurp(r2), s3 = slurp(r3);
  require(s1 == s2, "serial vs parallel reports differ");
  require(s1 == s3, "repeated serial reports differ");

#ifdef GOLDEN_DIR
  // Golden cross-run check on a checked-in fixture.
  std::string gin = std::string(GOLDEN_DIR) + "/clock_shift_d3.json";
  std::string gref = std::string(GOLDEN_DIR) + "/clock_shift_d3.decompose.json";
  if (std::filesystem::exists(gin) && std::filesystem::exists(gref)) {
    std::string gout = tmp_file("woldkit_acc_golden.json");
    CliResult g = run_cli("decompose " + gin + " --canonical --out " + gout);
    require(g.exit_code == 0, "golden decompose exit code");
    require(slurp(gout) == slurp(gref), "golden report drifted");
    std::remove(gout.c_str());
  }
#endif
  for (const auto& f : {in, r1, r2, r3}) std::remove(f.c_str());
}

}  // namespace

int main() {
  criterion(1, "relation fidelity, Examples 3.4/3.5 at N=12 under 5s", criterion_1);
  criterion(2, "negative control, Example 3.6 via the CLI", criterion_2);
  criterion(3, "canonical recovery, 100 planted contractions under 30s", criterion_3);
  criterion(4, "2^n decomposition, 50 planted tuples under 60s", criterion_4);
  criterion(5, "engine vs pair-formula cross-oracle on every n=2 instance", criterion_5);
  criterion(6, "lattice/dense oracle, Example 3.5 at N=10, 100% interior agreement",
            criterion_6);
  criterion(7, "pair-isometry formulas equal classify_index on 5 zoo configurations",
            criterion_7);
  criterion(8, "Lemma 3.3 suite, l,m in {0..3}, with the 3.6 violation", criterion_8);
  criterion(9, "byte-identical canonicalized decompose reports", criterion_9);
  return g_failures == 0 ? 0 : 1;
}
