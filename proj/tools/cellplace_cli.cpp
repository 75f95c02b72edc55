// cellplace — cell layout optimization harness.
//
// Exit codes: 0 success, 1 usage/argument error, 2 I/O or parse error,
// 3 validation failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cellplace/instance.hpp"
#include "cellplace/objective.hpp"
#include "cellplace/solvers.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitValidation = 3;

struct UsageFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem_of(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

cellplace::CellLayoutInstance load_instance(const std::string& path) {
  return cellplace::parse_instance(read_file(path), stem_of(path));
}

struct RunRecord {
  std::string instance_name;
  int n;
  double w;
  std::string solver;
  std::uint64_t seed;
  double total;
  double flow_term;
  double closeness_term;
  std::string perm;  // comma-joined locations, cell order
  std::uint64_t evaluations;
  std::int64_t wall_ms;
};

std::string join_perm(const cellplace::Assignment& perm) {
  std::string s;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(perm[i]);
  }
  return s;
}

RunRecord make_record(const cellplace::CellLayoutInstance& inst, const std::string& solver,
                      std::uint64_t seed, const cellplace::SolveResult& res,
                      std::int64_t wall_ms) {
  return {inst.name,         inst.n,
          inst.w,            solver,
          seed,              res.cost.total,
          res.cost.flow_term, res.cost.closeness_term,
          join_perm(res.best), res.evaluations,
          wall_ms};
}

constexpr const char* kCsvHeader =
    "instance,n,w,solver,seed,total,flow_term,closeness_term,perm,evaluations,wall_ms";

std::string record_csv_row(const RunRecord& r) {
  std::ostringstream out;
  out << r.instance_name << ',' << r.n << ',' << fmt12(r.w) << ',' << r.solver << ',' << r.seed
      << ',' << fmt12(r.total) << ',' << fmt12(r.flow_term) << ',' << fmt12(r.closeness_term)
      << ',' << '"' << r.perm << '"' << ',' << r.evaluations << ',' << r.wall_ms;
  return out.str();
}

json record_json(const RunRecord& r) {
  return json{{"instance_name", r.instance_name},
              {"n", r.n},
              {"w", r.w},
              {"solver", r.solver},
              {"seed", r.seed},
              {"total", r.total},
              {"flow_term", r.flow_term},
              {"closeness_term", r.closeness_term},
              {"perm", r.perm},
              {"evaluations", r.evaluations},
              {"wall_ms", r.wall_ms}};
}

void print_record(const RunRecord& r, const std::string& format) {
  if (format == "csv") {
    std::cout << kCsvHeader << '\n' << record_csv_row(r) << '\n';
  } else if (format == "json") {
    std::cout << record_json(r).dump(2) << '\n';
  } else {
    std::cout << "instance:        " << r.instance_name << '\n'
              << "n:               " << r.n << '\n'
              << "w:               " << fmt12(r.w) << '\n'
              << "solver:          " << r.solver << '\n'
              << "seed:            " << r.seed << '\n'
              << "total:           " << fmt12(r.total) << '\n'
              << "flow_term:       " << fmt12(r.flow_term) << '\n'
              << "closeness_term:  " << fmt12(r.closeness_term) << '\n'
              << "perm:            " << r.perm << '\n'
              << "evaluations:     " << r.evaluations << '\n'
              << "wall_ms:         " << r.wall_ms << '\n';
  }
}

void write_trace(const std::string& path, const std::vector<cellplace::TracePoint>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoFailure("cannot write trace file '" + path + "'");
  out << "stage,temperature,incumbent_total\n";
  for (const auto& tp : trace)
    out << tp.stage << ',' << fmt12(tp.temperature) << ',' << fmt12(tp.incumbent_total) << '\n';
}

struct CommonOpts {
  std::string instance_path;
  double w = -1.0;  // <0 means: keep the file's W
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string trace_path;
};

struct SaOpts {
  int restarts = 10;
  double alpha = 0.95;
  double t0 = 0.0;
  double t_min = 1e-6;
  int moves_per_temp = 0;
  int patience = 50;
};

cellplace::SaParams to_params(const SaOpts& o, std::uint64_t seed, bool trace) {
  cellplace::SaParams p;
  p.t0 = o.t0;
  p.alpha = o.alpha;
  p.moves_per_temp = o.moves_per_temp;
  p.t_min = o.t_min;
  p.max_stages_without_improvement = o.patience;
  p.restarts = o.restarts;
  p.seed = seed;
  p.collect_trace = trace;
  return p;
}

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_format = true) {
  cmd->add_option("instance", opts.instance_path, "instance file")->required();
  cmd->add_option("--w", opts.w, "override the file's load factor w")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", opts.seed, "master random seed");
  if (with_format)
    cmd->add_option("--out", opts.format, "output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
}

void add_sa_flags(CLI::App* cmd, SaOpts& sa) {
  cmd->add_option("--restarts", sa.restarts, "independent annealing runs");
  cmd->add_option("--alpha", sa.alpha, "geometric cooling factor");
  cmd->add_option("--t0", sa.t0, "initial temperature (0 = auto)");
  cmd->add_option("--tmin", sa.t_min, "stopping temperature");
  cmd->add_option("--moves-per-temp", sa.moves_per_temp, "proposals per stage (0 = 20*n)");
  cmd->add_option("--patience", sa.patience, "stages without improvement before stopping");
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start)
      .count();
}

int run_solve(const CommonOpts& opts, const SaOpts& sa) {
  auto inst = load_instance(opts.instance_path);
  if (opts.w >= 0.0) inst.w = opts.w;
  const auto params = to_params(sa, opts.seed, !opts.trace_path.empty());
  const auto start = std::chrono::steady_clock::now();
  cellplace::SolveResult res;
  try {
    res = cellplace::simulated_annealing(inst, params);
  } catch (const cellplace::InvalidParams& e) {
    throw UsageFailure(e.what());
  }
  print_record(make_record(inst, "sa", opts.seed, res, elapsed_ms(start)), opts.format);
  if (!opts.trace_path.empty()) write_trace(opts.trace_path, res.trace);
  return kExitOk;
}

int run_exact(const CommonOpts& opts, bool force) {
  auto inst = load_instance(opts.instance_path);
  if (opts.w >= 0.0) inst.w = opts.w;
  const auto start = std::chrono::steady_clock::now();
  cellplace::SolveResult res;
  try {
    res = cellplace::brute_force(inst, force);
  } catch (const cellplace::InstanceTooLarge& e) {
    throw UsageFailure(e.what());
  }
  print_record(make_record(inst, "exact", 0, res, elapsed_ms(start)), opts.format);
  return kExitOk;
}

int run_sweep(const CommonOpts& opts, const SaOpts& sa, const std::string& w_list,
              const std::string& solver) {
  auto inst = load_instance(opts.instance_path);

  std::vector<double> ws;
  std::stringstream ss(w_list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double w;
    try {
      w = std::stod(tok);
    } catch (const std::exception&) {
      throw UsageFailure("bad w value '" + tok + "'");
    }
    if (!(w >= 0.0 && w <= 1.0)) throw UsageFailure("w value " + tok + " outside [0, 1]");
    ws.push_back(w);
  }
  if (ws.empty()) throw UsageFailure("empty w list");

  std::vector<RunRecord> records;
  for (double w : ws) {
    inst.w = w;
    const auto start = std::chrono::steady_clock::now();
    cellplace::SolveResult res;
    if (solver == "exact") {
      res = cellplace::brute_force(inst);
    } else if (solver == "greedy") {
      cellplace::Assignment identity(inst.n);
      std::iota(identity.begin(), identity.end(), 0);
      res = cellplace::greedy_descent(inst, identity);
    } else {
      res = cellplace::simulated_annealing(inst, to_params(sa, opts.seed, false));
    }
    records.push_back(make_record(inst, solver, opts.seed, res, elapsed_ms(start)));
  }

  if (opts.format == "json") {
    json arr = json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
    std::cout << arr.dump(2) << '\n';
  } else {
    std::cout << kCsvHeader << '\n';
    for (const auto& r : records) std::cout << record_csv_row(r) << '\n';
  }
  return kExitOk;
}

int run_eval(const CommonOpts& opts, const std::string& perm_str) {
  auto inst = load_instance(opts.instance_path);
  if (opts.w >= 0.0) inst.w = opts.w;

  cellplace::Assignment perm;
  std::stringstream ss(perm_str);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      perm.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageFailure("bad permutation entry '" + tok + "'");
    }
  }
  cellplace::CostBreakdown cb;
  try {
    cb = cellplace::evaluate(inst, perm);
  } catch (const std::exception& e) {
    throw UsageFailure(e.what());
  }
  std::cout << "flow_term:       " << fmt12(cb.flow_term) << '\n'
            << "closeness_term:  " << fmt12(cb.closeness_term) << '\n'
            << "total:           " << fmt12(cb.total) << '\n';
  return kExitOk;
}

int run_gen(int n, std::uint64_t seed, double density, double max_flow, double w,
            const std::string& out_path) {
  cellplace::CellLayoutInstance inst;
  try {
    inst = cellplace::generate_random_instance(n, seed, density, max_flow, w);
  } catch (const cellplace::InvalidGeneratorArgs& e) {
    throw UsageFailure(e.what());
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoFailure("cannot write '" + out_path + "'");
  out << cellplace::serialize_instance(inst);
  return kExitOk;
}

int run_validate(const std::string& path) {
  const auto inst = load_instance(path);
  const auto violations = cellplace::validate_instance(inst);
  if (violations.empty()) {
    std::cout << "OK\n";
    return kExitOk;
  }
  for (const auto& v : violations) std::cout << v << '\n';
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cellplace — manufacturing cell layout optimizer"};
  app.require_subcommand(1);

  CommonOpts opts;
  SaOpts sa;

  auto* solve = app.add_subcommand("solve", "simulated annealing on an instance file");
  add_common_flags(solve, opts);
  add_sa_flags(solve, sa);
  solve->add_option("--trace", opts.trace_path, "write convergence trace CSV here");

  bool force = false;
  auto* exact = app.add_subcommand("exact", "exhaustive search (n <= 10 unless --force)");
  add_common_flags(exact, opts);
  exact->add_flag("--force", force, "allow n > 10");

  std::string sweep_w = "0.2,0.4,0.6,0.8";
  std::string sweep_solver = "sa";
  auto* sweep = app.add_subcommand("sweep", "solve once per w value");
  sweep->add_option("instance", opts.instance_path, "instance file")->required();
  sweep->add_option("--w", sweep_w, "comma-separated w values");
  sweep->add_option("--solver", sweep_solver, "solver to sweep")
      ->check(CLI::IsMember({"sa", "exact", "greedy"}));
  sweep->add_option("--seed", opts.seed, "master random seed");
  sweep->add_option("--out", opts.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  add_sa_flags(sweep, sa);
  sweep->parse_complete_callback([&opts] {
    if (opts.format == "text") opts.format = "csv";
  });

  std::string eval_perm;
  auto* eval = app.add_subcommand("eval", "evaluate a given assignment");
  eval->add_option("instance", opts.instance_path, "instance file")->required();
  eval->add_option("--perm", eval_perm, "comma-joined location of each cell")->required();
  eval->add_option("--w", opts.w, "override the file's load factor w")
      ->check(CLI::Range(0.0, 1.0));

  int gen_n = 0;
  double gen_density = 0.5, gen_max_flow = 10.0, gen_w = 0.5;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "write a deterministic random instance");
  gen->add_option("--n", gen_n, "number of cells")->required();
  gen->add_option("--seed", opts.seed, "generator seed");
  gen->add_option("--density", gen_density, "flow density in (0, 1]");
  gen->add_option("--max-flow", gen_max_flow, "flow magnitude upper bound");
  gen->add_option("--w", gen_w, "load factor written to the file")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out-path", gen_out, "output file")->required();

  auto* validate = app.add_subcommand("validate", "check all instance invariants");
  validate->add_option("instance", opts.instance_path, "instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve->parsed()) return run_solve(opts, sa);
    if (exact->parsed()) return run_exact(opts, force);
    if (sweep->parsed()) return run_sweep(opts, sa, sweep_w, sweep_solver);
    if (eval->parsed()) return run_eval(opts, eval_perm);
    if (gen->parsed()) return run_gen(gen_n, opts.seed, gen_density, gen_max_flow, gen_w, gen_out);
    if (validate->parsed()) return run_validate(opts.instance_path);
  } catch (const UsageFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cellplace::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
