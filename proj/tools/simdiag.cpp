// simdiag: classify symmetric matrix sets, dump diagonalizing congruence
// sequences, solve the single-constraint QCQP, and build D-SDO
// factorizations. One binary, subcommands; see --help.
//
// Exit codes: 0 yes/success, 1 no, 2 unknown, 3 error, 64 usage.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "simdiag/classify.hpp"
#include "simdiag/dsdo.hpp"
#include "simdiag/qcqp.hpp"

using nlohmann::json;
using namespace simdiag;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;
constexpr int kExitUsage = 64;

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& what) : std::runtime_error(what), code(c) {}
};

// ---------------------------------------------------------------- tolerances

const std::vector<std::pair<std::string, double Config::*>> kTolTable = {
    {"sym_rel", &Config::sym_rel},       {"det_rel", &Config::det_rel},
    {"pd_tol", &Config::pd_tol},         {"eig_rel", &Config::eig_rel},
    {"rank_tol", &Config::rank_tol},     {"jordan_tol", &Config::jordan_tol},
    {"canon_rel", &Config::canon_rel},   {"comm_rel", &Config::comm_rel},
    {"diag_tol", &Config::diag_tol},     {"fact_tol", &Config::fact_tol},
    {"lp_pivot", &Config::lp_pivot},
};

std::string upper(std::string s) {
  for (char& c : s) c = (c == '.' || c == '-') ? '_' : std::toupper(c);
  return s;
}

// precedence: --tol.NAME=value flag > SIMDIAG_TOL_NAME env > default
Config make_config(const std::map<std::string, double>& flag_tols) {
  Config cfg;
  for (const auto& [name, member] : kTolTable) {
    if (const char* env = std::getenv(("SIMDIAG_TOL_" + upper(name)).c_str()))
      cfg.*member = std::strtod(env, nullptr);
    auto it = flag_tols.find(name);
    if (it != flag_tols.end()) cfg.*member = it->second;
  }
  if (const char* env = std::getenv("SIMDIAG_SEED"))
    cfg.seed = std::strtoull(env, nullptr, 10);
  return cfg;
}

// strip --tol.NAME=value arguments before CLI11 sees them
std::map<std::string, double> extract_tol_flags(std::vector<std::string>& args) {
  std::map<std::string, double> out;
  std::vector<std::string> keep;
  for (const auto& a : args) {
    if (a.rfind("--tol.", 0) == 0) {
      auto eq = a.find('=');
      if (eq == std::string::npos)
        throw CliError(kExitUsage, "expected --tol.NAME=value, got " + a);
      std::string name = a.substr(6, eq - 6);
      bool known = false;
      for (const auto& [n, m] : kTolTable) known |= (n == name);
      if (!known) throw CliError(kExitUsage, "unknown tolerance: " + name);
      out[name] = std::strtod(a.c_str() + eq + 1, nullptr);
    } else {
      keep.push_back(a);
    }
  }
  args = keep;
  return out;
}

// ------------------------------------------------------------- file formats

struct ParsedFile {
  SymMatrixSet set;
  std::optional<double> b;             // qcqp: constraint bound
  std::optional<std::vector<double>> c;  // qcqp: constraint constants
};

void enforce_symmetry(std::vector<Mat>& mats, bool symmetrize,
                      const Config& cfg) {
  for (std::size_t i = 0; i < mats.size(); ++i) {
    Mat& A = mats[i];
    Mat D = A - A.transpose();
    Eigen::Index r = 0, cidx = 0;
    double worst = D.cwiseAbs().maxCoeff(&r, &cidx);
    if (worst > cfg.sym_rel * std::max(1.0, A.norm())) {
      if (!symmetrize)
        throw CliError(kExitError,
                       "matrix " + std::to_string(i) + " is not symmetric: " +
                           "entry (" + std::to_string(r) + "," +
                           std::to_string(cidx) + ") differs from its mirror " +
                           "by " + std::to_string(worst) +
                           " (use --symmetrize to average)");
      A = 0.5 * (A + A.transpose().eval());
    }
  }
}

ParsedFile parse_json_set(const std::string& text, bool symmetrize,
                          const Config& cfg) {
  json doc = json::parse(text);
  if (!doc.contains("dim") || !doc.contains("mats"))
    throw CliError(kExitError, "JSON matrix file needs \"dim\" and \"mats\"");
  int m = doc["dim"].get<int>();
  std::vector<Mat> mats;
  for (const auto& jm : doc["mats"]) {
    if (static_cast<int>(jm.size()) != m)
      throw CliError(kExitError, "matrix " + std::to_string(mats.size()) +
                                     " has " + std::to_string(jm.size()) +
                                     " rows, expected " + std::to_string(m));
    Mat A(m, m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>(jm[i].size()) != m)
        throw CliError(kExitError,
                       "matrix " + std::to_string(mats.size()) + " row " +
                           std::to_string(i) + " has " +
                           std::to_string(jm[i].size()) + " entries, expected " +
                           std::to_string(m));
      for (int j = 0; j < m; ++j) A(i, j) = jm[i][j].get<double>();
    }
    mats.push_back(A);
  }
  enforce_symmetry(mats, symmetrize, cfg);
  ParsedFile out{SymMatrixSet(m, std::move(mats), cfg), {}, {}};
  if (doc.contains("b")) out.b = doc["b"].get<double>();
  if (doc.contains("c")) out.c = doc["c"].get<std::vector<double>>();
  return out;
}

ParsedFile parse_ws_set(const std::string& text, bool symmetrize,
                        const Config& cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&]() {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw CliError(kExitError, "empty matrix file");
  std::istringstream head(line);
  int m = 0, L = 0;
  if (!(head >> m >> L) || m < 1 || L < 1)
    throw CliError(kExitError,
                   "line " + std::to_string(lineno) + ": expected \"m L\"");
  std::vector<Mat> mats;
  for (int l = 0; l < L; ++l) {
    Mat A(m, m);
    for (int i = 0; i < m; ++i) {
      if (!next_line())
        throw CliError(kExitError, "line " + std::to_string(lineno + 1) +
                                       ": unexpected end of file in matrix " +
                                       std::to_string(l));
      std::istringstream row(line);
      for (int j = 0; j < m; ++j)
        if (!(row >> A(i, j)))
          throw CliError(kExitError, "line " + std::to_string(lineno) +
                                         ": expected " + std::to_string(m) +
                                         " reals");
      double extra;
      if (row >> extra)
        throw CliError(kExitError, "line " + std::to_string(lineno) +
                                       ": more than " + std::to_string(m) +
                                       " entries");
    }
    mats.push_back(A);
  }
  enforce_symmetry(mats, symmetrize, cfg);
  return {SymMatrixSet(m, std::move(mats), cfg), {}, {}};
}

ParsedFile parse_matrix_file(const std::string& path, bool symmetrize,
                             const Config& cfg) {
  std::ifstream f(path);
  if (!f) throw CliError(kExitError, "cannot open " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos)
    throw CliError(kExitError, "empty matrix file " + path);
  return text[first] == '{' ? parse_json_set(text, symmetrize, cfg)
                            : parse_ws_set(text, symmetrize, cfg);
}

json matrix_to_json(const Mat& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
    rows.push_back(row);
  }
  return rows;
}

json set_to_json(const SymMatrixSet& C) {
  json mats = json::array();
  for (const auto& A : C.mats) mats.push_back(matrix_to_json(A));
  return json{{"dim", C.dim}, {"mats", mats}};
}

// ------------------------------------------------------------------ reports

json report_to_json(const ClassificationReport& rep) {
  json j{{"property", to_string(rep.property)},
         {"verdict", to_string(rep.verdict)},
         {"rule", rep.trace.rule}};
  if (rep.n > 0) j["n"] = rep.n;
  if (!rep.trace.measured.empty()) {
    json m = json::object();
    for (const auto& [k, v] : rep.trace.measured) m[k] = v;
    j["measured"] = m;
  }
  if (rep.commutator_norms) j["commutator_norms"] = *rep.commutator_norms;
  if (rep.pencil) {
    j["pencil"] = {{"kind", static_cast<int>(rep.pencil->kind)},
                   {"coeffs", std::vector<double>(
                                  rep.pencil->coeffs.data(),
                                  rep.pencil->coeffs.data() +
                                      rep.pencil->coeffs.size())}};
  }
  if (rep.orthogonal_Q) j["orthogonal_Q"] = matrix_to_json(*rep.orthogonal_Q);
  return j;
}

void print_report_text(const ClassificationReport& rep) {
  std::cout << to_string(rep.property) << ": " << to_string(rep.verdict)
            << "  [" << rep.trace.rule << "]\n";
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Yes: return kExitYes;
    case Verdict::No: return kExitNo;
    default: return kExitUnknown;
  }
}

// --------------------------------------------------------------- subcommands

ClassificationReport run_property(const std::string& prop,
                                  const SymMatrixSet& C, int n,
                                  const Config& cfg) {
  if (prop == "SDO") return check_sdo(C, cfg);
  if (prop == "SD") return check_sd(C, cfg);
  if (prop == "TWSD-B") return check_twsdb_set(C, cfg);
  if (prop == "TWSD") return check_twsd(C, cfg);
  if (prop == "DWSD") return check_dwsd(C, cfg);
  if (prop == "T-SD") return check_t_sd(C, n > 0 ? n : C.dim, false, cfg);
  if (prop == "T-SDO") return check_t_sd(C, n > 0 ? n : C.dim, true, cfg);
  throw CliError(kExitUsage, "unknown property: " + prop);
}

int cmd_classify(const std::string& path, const std::string& prop, int n,
                 bool symmetrize, bool as_json, const Config& cfg) {
  auto parsed = parse_matrix_file(path, symmetrize, cfg);
  const auto& C = parsed.set;
  if (prop != "all") {
    auto rep = run_property(prop, C, n, cfg);
    if (as_json) {
      json j = report_to_json(rep);
      j["schema"] = 1;
      std::cout << j.dump(2) << "\n";
    } else {
      print_report_text(rep);
    }
    return verdict_exit(rep.verdict);
  }
  // full lattice row with the implication consistency check
  const std::vector<std::string> order = {"SDO", "SD", "TWSD-B", "TWSD",
                                          "DWSD"};
  std::map<std::string, ClassificationReport> reps;
  for (const auto& p : order) reps.emplace(p, run_property(p, C, n, cfg));
  auto implies_ok = [&](const std::string& a, const std::string& b) {
    return !(reps.at(a).verdict == Verdict::Yes &&
             reps.at(b).verdict == Verdict::No);
  };
  bool consistent = implies_ok("SDO", "SD") && implies_ok("SD", "TWSD-B") &&
                    implies_ok("TWSD-B", "TWSD") && implies_ok("SD", "DWSD");
  if (as_json) {
    json j{{"schema", 1}, {"consistent", consistent}};
    json arr = json::array();
    for (const auto& p : order) arr.push_back(report_to_json(reps.at(p)));
    j["reports"] = arr;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& p : order) print_report_text(reps.at(p));
    std::cout << "consistent: " << (consistent ? "yes" : "NO") << "\n";
  }
  return consistent ? kExitYes : kExitError;
}

int cmd_sequence(const std::string& path, std::vector<double> ks,
                 bool symmetrize, bool as_json, const Config& cfg) {
  auto parsed = parse_matrix_file(path, symmetrize, cfg);
  const auto& C = parsed.set;
  if (ks.empty()) ks = {10.0, 100.0, 1000.0};
  std::sort(ks.begin(), ks.end());
  auto rep = C.size() == 2
                 ? check_twsdb_pair(C.mats[0], C.mats[1], cfg)
                 : check_twsd(C, cfg);
  if (!rep.sequence)
    throw CliError(kExitError,
                   "no congruence-sequence certificate available for this set "
                   "(verdict: " + std::string(to_string(rep.verdict)) + ")");
  const auto& seq = *rep.sequence;
  json table = json::array();
  for (double k : ks) {
    Mat P = evaluate(seq, k);
    double off = 0.0, dmax = 0.0;
    for (const auto& A : C.mats) {
      Mat W = P.transpose() * A * P;
      off += offdiag(W).norm();
      dmax = std::max(dmax, diagpart(W).norm());
    }
    table.push_back({{"k", k},
                     {"P", matrix_to_json(P)},
                     {"offdiag_sum", off},
                     {"diag_max", dmax},
                     {"det_drift", std::abs(P.determinant() - seq.det_value) /
                                       std::abs(seq.det_value)}});
  }
  json j{{"schema", 1}, {"det", seq.det_value}, {"rows", table}};
  if (ks.size() >= 3) {
    auto ver = verify_sequence(C, seq, ks);
    j["monotone_decay"] = ver.monotone_decay;
    j["bounded_diag"] = ver.bounded_diag;
    j["det_constant"] = ver.det_constant;
  }
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "k offdiag_sum diag_max det_drift\n";
    for (const auto& row : j["rows"])
      std::cout << row["k"].get<double>() << " "
                << row["offdiag_sum"].get<double>() << " "
                << row["diag_max"].get<double>() << " "
                << row["det_drift"].get<double>() << "\n";
  }
  return kExitYes;
}

int cmd_qcqp(const std::string& path, bool relax, double b_flag, bool has_b,
             double k, bool symmetrize, bool as_json, const Config& cfg) {
  auto parsed = parse_matrix_file(path, symmetrize, cfg);
  const auto& C = parsed.set;
  if (!relax) {
    if (C.size() != 2)
      throw CliError(kExitError,
                     "qcqp --single expects two matrices: objective, then "
                     "constraint");
    SingleConstraintProblem p;
    p.B = C.mats[0];
    p.A = C.mats[1];
    p.b = has_b ? b_flag : parsed.b.value_or(0.0);
    auto res = solve_single_constraint(p, cfg);
    const char* status = nullptr;
    switch (res.status) {
      case SingleConstraintResult::Status::Attained: status = "attained"; break;
      case SingleConstraintResult::Status::InfimumOnly:
        status = "infimum-only";
        break;
      case SingleConstraintResult::Status::UnboundedBelow:
        status = "unbounded-below";
        break;
      case SingleConstraintResult::Status::Infeasible:
        status = "infeasible";
        break;
    }
    json j{{"schema", 1}, {"mode", "single"}, {"status", status},
           {"note", res.note}};
    bool has_value =
        res.status == SingleConstraintResult::Status::Attained ||
        res.status == SingleConstraintResult::Status::InfimumOnly;
    if (has_value) j["value"] = res.value;
    if (res.status == SingleConstraintResult::Status::Attained)
      j["point"] = std::vector<double>(res.point.data(),
                                       res.point.data() + res.point.size());
    if (as_json)
      std::cout << j.dump(2) << "\n";
    else if (has_value)
      std::cout << "status: " << status << "\nvalue: " << res.value << "\n";
    else
      std::cout << "status: " << status << "\n";
    return has_value ? kExitYes : kExitNo;
  }

  // LP relaxation: first matrix is the objective, the rest are constraints
  if (C.size() < 2)
    throw CliError(kExitError,
                   "qcqp --relax expects an objective plus constraints");
  QcqpInstance q;
  q.dim = C.dim;
  q.objective = {C.mats[0], Vec::Zero(C.dim), 0.0};
  for (int l = 1; l < C.size(); ++l) {
    double c = parsed.c && l - 1 < static_cast<int>(parsed.c->size())
                   ? (*parsed.c)[l - 1]
                   : -1.0;
    q.constraints.push_back({C.mats[l], Vec::Zero(C.dim), c});
  }
  auto cls = check_twsd(C, cfg);
  CongruenceSequence seq;
  if (cls.sequence) {
    seq = *cls.sequence;
  } else {
    seq.dim = C.dim;
    seq.recipe = SeqConstant{Mat::Identity(C.dim, C.dim)};
  }
  auto rel = lp_relaxation(q, seq, k, cfg);
  auto sol = solve_lp(rel.lp);
  json j{{"schema", 1},
         {"mode", "relax"},
         {"k", k},
         {"dropped_mass", rel.dropped_mass},
         {"lp_status", sol.status == LpResult::Status::Optimal     ? "optimal"
                       : sol.status == LpResult::Status::Unbounded ? "unbounded"
                                                                  : "infeasible"}};
  if (sol.status == LpResult::Status::Optimal) {
    Vec x = rel.back_map(sol.point);
    j["value"] = sol.value;
    j["u"] = std::vector<double>(sol.point.data(),
                                 sol.point.data() + sol.point.size());
    j["x"] = std::vector<double>(x.data(), x.data() + x.size());
  }
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << "dropped_mass: " << rel.dropped_mass << "\nlp_status: "
              << j["lp_status"].get<std::string>()
              << (j.contains("value")
                      ? "\nvalue: " + std::to_string(j["value"].get<double>())
                      : std::string())
              << "\n";
  return sol.status == LpResult::Status::Optimal ? kExitYes : kExitNo;
}

int cmd_dsdo(const std::string& path, bool basis, bool symmetrize,
             bool as_json, const Config& cfg) {
  auto parsed = parse_matrix_file(path, symmetrize, cfg);
  auto f = basis ? dsdo_basis_construct(parsed.set.dim, cfg)
                 : dsdo_construct(parsed.set, cfg);
  json ds = json::array();
  for (const auto& D : f.D) {
    Vec d = D.diagonal();
    ds.push_back(std::vector<double>(d.data(), d.data() + d.size()));
  }
  json j{{"schema", 1},
         {"dim", static_cast<int>(f.P.cols())},
         {"n", static_cast<int>(f.P.rows())},
         {"P", matrix_to_json(f.P)},
         {"D", ds},
         {"residual", f.residual}};
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << "n: " << f.P.rows() << "\nresidual: " << f.residual << "\n";
  return kExitYes;
}

int cmd_synth(const std::vector<std::string>& block_specs,
              std::uint64_t scramble_seed, bool scramble, const Config& cfg) {
  std::vector<LancasterBlockDescriptor> blocks;
  for (const auto& spec : block_specs) {
    // type:m:sign:lambda[:mu:nu]
    std::vector<std::string> parts;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() < 3)
      throw CliError(kExitUsage,
                     "block spec must be type:m:sign[:lambda[:mu:nu]]");
    LancasterBlockDescriptor d;
    d.type = std::stoi(parts[0]);
    d.m = std::stoi(parts[1]);
    d.sign = std::stoi(parts[2]);
    if (parts.size() > 3) d.lambda = std::stod(parts[3]);
    if (parts.size() > 4) d.mu = std::stod(parts[4]);
    if (parts.size() > 5) d.nu = std::stod(parts[5]);
    blocks.push_back(d);
  }
  if (blocks.empty()) throw CliError(kExitUsage, "need at least one --block");
  std::optional<Mat> S;
  int total = 0;
  for (const auto& b : blocks) total += b.total_dim();
  if (scramble) {
    std::mt19937_64 rng(scramble_seed ? scramble_seed : cfg.seed);
    std::normal_distribution<double> g;
    Mat G(total, total);
    do {
      for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j) G(i, j) = g(rng);
    } while (std::abs(G.determinant()) < 1e-3);
    S = G / std::pow(std::abs(G.determinant()), 1.0 / total);
  }
  auto [A, B] = synthesize_lancaster_pair(blocks, S);
  SymMatrixSet C(total, {A, B}, cfg);
  std::cout << set_to_json(C).dump(2) << "\n";
  return kExitYes;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  bool as_json = false;
  try {
    auto tol_flags = extract_tol_flags(args);
    Config cfg = make_config(tol_flags);

    CLI::App app{"simultaneous diagonalization toolkit"};
    app.require_subcommand(1);

    std::string path, prop = "all";
    int n = 0;
    bool symmetrize = false, text = false;
    std::vector<double> ks;
    bool relax = false, basis = false, scramble = false;
    double b_flag = 0.0, k_val = 100.0;
    std::vector<std::string> block_specs;
    std::uint64_t scramble_seed = 0;

    auto add_io = [&](CLI::App* sub, bool needs_file = true) {
      if (needs_file)
        sub->add_option("file", path, "matrix set file (JSON or whitespace)")
            ->required();
      sub->add_flag("--symmetrize", symmetrize,
                    "average asymmetric input as (A+A^T)/2");
      sub->add_flag("--json", as_json, "machine-readable JSON output");
      sub->add_flag("--text", text, "plain text output (default)");
    };

    auto* classify = app.add_subcommand("classify", "decide SD-family labels");
    add_io(classify);
    classify->add_option("--property", prop,
                         "SDO|SD|TWSD-B|TWSD|DWSD|T-SD|T-SDO|all");
    classify->add_option("--n", n, "target dimension for T- labels");

    auto* sequence =
        app.add_subcommand("sequence", "emit the congruence sequence P_k");
    add_io(sequence);
    sequence->add_option("--k", ks, "k grid (comma separated)")
        ->delimiter(',');

    auto* qcqp = app.add_subcommand("qcqp", "single-constraint QCQP / LP relax");
    add_io(qcqp);
    qcqp->add_flag("--single", [](std::int64_t) {},
                   "solve min x^T B x s.t. x^T A x <= b (default)");
    qcqp->add_flag("--relax", relax, "diagonal LP relaxation mode");
    auto* bopt = qcqp->add_option("--b", b_flag, "constraint bound");
    qcqp->add_option("--kval", k_val, "sequence parameter for --relax");

    auto* dsdo = app.add_subcommand("dsdo", "build a D-SDO factorization");
    add_io(dsdo);
    dsdo->add_flag("--basis", basis,
                   "factor the full symmetric basis of the input dimension");

    auto* synth =
        app.add_subcommand("synth", "synthesize a canonical-block pair");
    synth->add_option("--block", block_specs,
                      "block spec type:m:sign[:lambda[:mu:nu]] (repeatable)")
        ->required();
    synth->add_flag("--scramble", scramble, "apply a random unimodular congruence");
    synth->add_option("--seed", scramble_seed, "scramble seed");
    synth->add_flag("--json", as_json, "machine-readable JSON output");

    try {
      std::vector<std::string> rev(args.rbegin(), args.rend());
      app.parse(rev);
    } catch (const CLI::ParseError& e) {
      std::cerr << e.what() << "\n";
      return kExitUsage;
    }
    if (as_json && text)
      throw CliError(kExitUsage, "--json and --text conflict");

    if (classify->parsed())
      return cmd_classify(path, prop, n, symmetrize, as_json, cfg);
    if (sequence->parsed())
      return cmd_sequence(path, ks, symmetrize, as_json, cfg);
    if (qcqp->parsed())
      return cmd_qcqp(path, relax, b_flag, bopt->count() > 0, k_val,
                      symmetrize, as_json, cfg);
    if (dsdo->parsed()) return cmd_dsdo(path, basis, symmetrize, as_json, cfg);
    if (synth->parsed()) return cmd_synth(block_specs, scramble_seed, scramble, cfg);
    return kExitUsage;
  } catch (const CliError& e) {
    if (as_json)
      std::cout << json{{"schema", 1}, {"error", e.what()}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    if (as_json)
      std::cout << json{{"schema", 1}, {"error", e.what()}}.dump(2) << "\n";
    else
      std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
