#include "cdvrp/cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cdvrp/errors.hpp"
#include "cdvrp/io.hpp"
#include "cdvrp/metric.hpp"
#include "cdvrp/oracle.hpp"
#include "cdvrp/solvers.hpp"

namespace cdvrp {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

// "Q:T[:multiplicity],Q:T,..."
FleetSpec parse_fleet_flag(const std::string& spec) {
  std::vector<VehicleClass> classes;
  std::stringstream entries(spec);
  std::string entry;
  while (std::getline(entries, entry, ',')) {
    std::vector<std::string> parts;
    std::stringstream fields(entry);
    std::string field;
    while (std::getline(fields, field, ':')) parts.push_back(field);
    if (parts.size() < 2 || parts.size() > 3) {
      throw UsageError("fleet entry '" + entry + "' is not Q:T[:multiplicity]");
    }
    try {
      VehicleClass cls;
      cls.capacity = std::stod(parts[0]);
      cls.distance_bound = std::stod(parts[1]);
      if (parts.size() == 3 && parts[2] != "inf") cls.multiplicity = std::stoul(parts[2]);
      classes.push_back(cls);
    } catch (const std::logic_error&) {
      throw UsageError("fleet entry '" + entry + "' has a non-numeric field");
    }
  }
  if (classes.empty()) throw UsageError("empty --fleet");
  return FleetSpec(std::move(classes));
}

double default_lambda(const MetricInstance& inst) {
  const double t_min = inst.fleet().min_distance_bound();
  const double lambda = t_min - 2.0 * inst.depot_radius();
  return lambda > 0.0 ? lambda : t_min;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  if (report.ok()) {
    out << "ok\n";
    return;
  }
  for (const auto& v : report.violations) out << "violation: " << describe(v) << "\n";
}

struct Options {
  // gen
  std::size_t n = 10;
  std::uint64_t seed = 1;
  double box = 100.0;
  std::string fleet = "10:300";
  double demand_min = 1.0;
  double demand_max = 5.0;
  // shared
  std::string file;
  std::string solution;
  std::string output;
  std::string algorithm;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::size_t max_n = OracleLimits{}.max_n;
  std::string solution_output;
};

int run_gen(const Options& o, std::ostream& out) {
  const MetricInstance inst = random_instance(o.n, o.seed, o.box,
                                              DemandRange{o.demand_min, o.demand_max},
                                              parse_fleet_flag(o.fleet));
  emit(write_instance(inst), o.output, out);
  return kExitOk;
}

int run_validate(const Options& o, std::ostream& out) {
  const MetricInstance inst = parse_instance_unchecked(read_file(o.file));
  const ValidationReport report = validate_instance(inst);
  if (report.ok()) {
    out << "ok: " << inst.name() << ", " << inst.size() << " vertices, depot radius "
        << inst.depot_radius() << ", T_min " << inst.fleet().min_distance_bound() << "\n";
    return kExitOk;
  }
  for (const auto& v : report.violations) out << "violation: " << describe(v) << "\n";
  return kExitInfeasible;
}

int run_solve(const Options& o, std::ostream& out) {
  const MetricInstance inst = parse_instance(read_file(o.file));
  RoutingSolution sol;
  if (o.algorithm == "min-nt") {
    sol = solve_min_nt(inst);
  } else if (o.algorithm == "min-nht") {
    sol = solve_min_nht_routes(inst, o.lambda.value_or(default_lambda(inst)));
  } else {
    sol = solve_bdcvrp(inst, o.alpha.value_or(0.5));
  }
  emit(write_solution(sol, inst), o.output, out);
  return kExitOk;
}

int run_verify(const Options& o, std::ostream& out) {
  const MetricInstance inst = parse_instance(read_file(o.file));
  const RoutingSolution sol = parse_solution(read_file(o.solution));
  const VerifyReport report = verify_solution(inst, sol, o.alpha);
  print_report(report, out);
  return report.ok() ? kExitOk : kExitInfeasible;
}

int run_oracle(const Options& o, std::ostream& out) {
  const MetricInstance inst = parse_instance(read_file(o.file));
  OracleLimits limits;
  limits.max_n = o.max_n;
  const auto sol = exact_min_tours(inst, limits);
  if (!sol) {
    out << "infeasible\n";
    return kExitInfeasible;
  }
  emit(write_solution(*sol, inst), o.output, out);
  return kExitOk;
}

int run_reduce(const Options& o, std::ostream& out) {
  const MetricInstance inst = parse_instance(read_file(o.file));
  const RoutingSolution sol = parse_solution(read_file(o.solution));
  const GadgetInstance gadget = reduce_dcvrp_to_bdcvrp(inst, sol, *o.alpha);
  emit(write_instance(gadget.instance), o.output, out);
  if (!o.solution_output.empty()) {
    emit(write_solution(gadget.padded, gadget.instance), o.solution_output, out);
  }
  return kExitOk;
}

int run_compare(const Options& o, std::ostream& out) {
  const MetricInstance inst = parse_instance(read_file(o.file));
  const RoutingSolution nt = solve_min_nt(inst);
  const RoutingSolution balanced = solve_bdcvrp(inst, o.alpha.value_or(0.5));

  out << std::setprecision(12);
  out << "instance " << inst.name() << " (" << inst.size() << " vertices)\n";
  out << "min-nt   pi " << nt.pi << " alpha " << nt.alpha << "\n";
  out << "bdcvrp   pi " << balanced.pi << " alpha " << balanced.alpha << "\n";
  if (inst.size() > o.max_n) {
    out << "oracle   skipped (" << inst.size() << " vertices > --max-n " << o.max_n << ")\n";
    return kExitOk;
  }
  OracleLimits limits;
  limits.max_n = o.max_n;
  const auto exact = exact_min_tours(inst, limits);
  if (!exact) {
    out << "oracle   infeasible\n";
    return kExitInfeasible;
  }
  out << "oracle   pi " << exact->pi << "\n";
  if (exact->pi > 0) {
    out << "ratio    min-nt " << static_cast<double>(nt.pi) / static_cast<double>(exact->pi)
        << " bdcvrp " << static_cast<double>(balanced.pi) / static_cast<double>(exact->pi)
        << "\n";
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity- and distance-constrained vehicle routing solvers", "cdvrp"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write a random Euclidean instance");
  gen->add_option("--n", o.n, "Vertex count, depot included")->required();
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--box", o.box, "Side of the square points are drawn from");
  gen->add_option("--fleet", o.fleet, "Vehicle classes as Q:T[:multiplicity],...");
  gen->add_option("--demand-min", o.demand_min, "Smallest customer demand");
  gen->add_option("--demand-max", o.demand_max, "Largest customer demand");
  gen->add_option("-o,--output", o.output, "Output file (stdout when omitted)");

  auto* validate = app.add_subcommand("validate", "Check an instance file");
  validate->add_option("file", o.file)->required();

  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("file", o.file)->required();
  solve->add_option("--alg", o.algorithm, "Algorithm")
      ->required()
      ->check(CLI::IsMember({"min-nt", "min-nht", "bdcvrp"}));
  solve->add_option("--lambda", o.lambda, "Path length target for min-nht");
  solve->add_option("--alpha", o.alpha, "Balance target for bdcvrp");
  solve->add_option("-o,--output", o.output, "Output file (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "Check a solution against an instance");
  verify->add_option("file", o.file)->required();
  verify->add_option("solution", o.solution)->required();
  verify->add_option("--alpha", o.alpha, "Also require this balance ratio");

  auto* oracle = app.add_subcommand("oracle", "Exact minimum tour count by enumeration");
  oracle->add_option("file", o.file)->required();
  oracle->add_option("--max-n", o.max_n, "Largest vertex count to attempt");
  oracle->add_option("-o,--output", o.output, "Output file (stdout when omitted)");

  auto* reduce = app.add_subcommand("reduce", "Pad a solution into a balanced gadget instance");
  reduce->add_option("file", o.file)->required();
  reduce->add_option("solution", o.solution)->required();
  reduce->add_option("--alpha", o.alpha, "Balance parameter in (0, 1)")->required();
  reduce->add_option("-o,--output", o.output, "Gadget instance file")->required();
  reduce->add_option("--solution-out", o.solution_output, "Padded solution file");

  auto* compare = app.add_subcommand("compare", "Solve, run the oracle and report ratios");
  compare->add_option("file", o.file)->required();
  compare->add_option("--alpha", o.alpha, "Balance target for bdcvrp");
  compare->add_option("--max-n", o.max_n, "Largest vertex count for the oracle");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return run_gen(o, out);
    if (*validate) return run_validate(o, out);
    if (*solve) return run_solve(o, out);
    if (*verify) return run_verify(o, out);
    if (*oracle) return run_oracle(o, out);
    if (*reduce) return run_reduce(o, out);
    if (*compare) return run_compare(o, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace cdvrp
