#include "autostep/experiment.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <thread>

#include "autostep/csv.hpp"
#include "autostep/version.hpp"

namespace autostep {

namespace {

const char* criterion_name(Criterion c) {
  return c == Criterion::symmetric ? "symmetric" : "asymmetric";
}

std::string derived_path(const std::string& base, const std::string& tag) {
  const auto dot = base.rfind('.');
  const auto slash = base.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "." + tag;
  return base.substr(0, dot) + "." + tag + base.substr(dot);
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

struct RunOutput {
  Eigen::MatrixXd trace;
  std::vector<IterationRecord> records;
};

RunOutput run_chain(Target& target, const SamplerSpec& spec, Criterion criterion,
                    double theta0, long long iterations, Rng& rng) {
  KernelConfig config;
  config.theta0 = theta0;
  config.criterion = criterion;
  config.family = spec.involution();

  RunOutput out;
  out.trace.resize(iterations, target.dim());
  out.records.reserve(static_cast<std::size_t>(iterations));

  const MassMatrix mass = MassMatrix::identity(target.dim());
  ChainState state = make_chain_state(target, config.family, initial_point(target, rng));
  for (long long t = 0; t < iterations; ++t) {
    const IterationRecord rec =
        spec.autostep
            ? autostep_transition(state, target, mass, config, rng)
            : fixed_step_transition(state, target, mass, config.family, theta0, rng);
    out.trace.row(t) = state.x;
    out.records.push_back(rec);
  }
  return out;
}

std::optional<ReferenceDistribution> resolve_reference(const std::string& ref_path,
                                                       const Target& target) {
  if (!ref_path.empty()) {
    const CsvTable table = read_csv(ref_path);
    return ReferenceDistribution::from_sample(table.values);
  }
  ReferenceDistribution analytic = ReferenceDistribution::from_target(target);
  for (int j = 0; j < target.dim(); ++j)
    if (!analytic.covers(j)) return std::nullopt;
  return analytic;
}

double compute_min_ksess(const Eigen::MatrixXd& trace, const ReferenceDistribution& ref) {
  try {
    return min_ksess(trace, ref);
  } catch (const std::invalid_argument&) {
    return -1.0;  // trace too short for the batch layout
  }
}

const std::vector<std::string>& summary_header() {
  static const std::vector<std::string> header = {
      "sampler",        "target",          "criterion",
      "theta0",         "seed",            "iterations",
      "acceptance",     "mean_abs_ell",    "mean_energy_jump",
      "mean_jump_dist", "mean_abs_j",      "cap_hits",
      "mean_ell_evals", "cost_ell",        "cost_grad",
      "alpha",          "cost_per_iter",   "ksess",
      "ksess_per_cost"};
  return header;
}

std::vector<std::string> summary_row(const std::string& sampler, const std::string& target,
                                     const std::string& criterion, double theta0,
                                     std::uint64_t seed, const RunSummary& s, double alpha,
                                     double ksess_value) {
  const double total_cost = CostModel{alpha}.cost(s.total_cost_ell, s.total_cost_grad);
  std::vector<std::string> row = {
      sampler,
      target,
      criterion,
      fmt_double(theta0),
      std::to_string(seed),
      std::to_string(s.iterations),
      fmt_double(s.acceptance),
      fmt_double(s.mean_abs_ell),
      fmt_double(s.mean_energy_jump),
      fmt_double(s.mean_jump_distance),
      fmt_double(s.mean_abs_j),
      std::to_string(s.cap_hits),
      fmt_double(s.mean_selector_evals),
      std::to_string(s.total_cost_ell),
      std::to_string(s.total_cost_grad),
      fmt_double(alpha),
      fmt_double(s.cost_per_iteration),
      ksess_value >= 0.0 ? fmt_double(ksess_value) : std::string(),
      ksess_value >= 0.0 && total_cost > 0.0 ? fmt_double(ksess_value / total_cost)
                                             : std::string()};
  return row;
}

void write_trace_csv(const std::string& path, const std::string& comment, int dim,
                     const Eigen::MatrixXd& trace,
                     const std::vector<IterationRecord>& records) {
  std::vector<std::string> header = {"iter"};
  for (int j = 1; j <= dim; ++j) header.push_back("x" + std::to_string(j));
  for (const char* name : {"accepted", "ell_abs", "energy_jump", "j_fwd", "j_rev",
                           "cost_ell", "cost_grad"})
    header.emplace_back(name);

  CsvWriter writer(path, comment, header);
  std::vector<std::string> row(header.size());
  for (std::size_t t = 0; t < records.size(); ++t) {
    std::size_t c = 0;
    row[c++] = std::to_string(t);
    for (int j = 0; j < dim; ++j)
      row[c++] = fmt_double(trace(static_cast<Eigen::Index>(t), j));
    const IterationRecord& r = records[t];
    row[c++] = r.accepted ? "1" : "0";
    row[c++] = fmt_double(r.ell_abs);
    row[c++] = fmt_double(r.energy_jump);
    row[c++] = std::to_string(r.j_forward);
    row[c++] = std::to_string(r.j_reverse);
    row[c++] = std::to_string(r.cost_ell);
    row[c++] = std::to_string(r.cost_grad);
    writer.row(row);
  }
}

}  // namespace

std::string SamplerSpec::canonical_name() const {
  std::string name = autostep ? "autostep-" : "fixed-";
  switch (kind) {
    case ProposalKind::rwmh: return name + "rwmh";
    case ProposalKind::mala: return name + "mala";
    case ProposalKind::hmc: return name + "hmc(" + std::to_string(path_length) + ")";
  }
  return name;
}

SamplerSpec parse_sampler(const std::string& name, int default_hmc_steps) {
  SamplerSpec spec;
  std::string rest;
  if (name.rfind("autostep-", 0) == 0) {
    spec.autostep = true;
    rest = name.substr(9);
  } else if (name.rfind("fixed-", 0) == 0) {
    spec.autostep = false;
    rest = name.substr(6);
  } else {
    throw ConfigError("unknown sampler '" + name +
                      "' (expected autostep-{rwmh,mala,hmc[(L)]} or fixed-{rwmh,mala,hmc[(L)]})");
  }
  if (rest == "rwmh") {
    spec.kind = ProposalKind::rwmh;
  } else if (rest == "mala") {
    spec.kind = ProposalKind::mala;
  } else if (rest == "hmc") {
    spec.kind = ProposalKind::hmc;
    spec.path_length = default_hmc_steps;
  } else if (rest.rfind("hmc(", 0) == 0 && rest.back() == ')') {
    spec.kind = ProposalKind::hmc;
    try {
      spec.path_length = std::stoi(rest.substr(4, rest.size() - 5));
    } catch (const std::exception&) {
      throw ConfigError("invalid hmc path length in sampler '" + name + "'");
    }
    if (spec.path_length < 1) throw ConfigError("hmc path length must be >= 1");
  } else {
    throw ConfigError("unknown sampler '" + name +
                      "' (expected autostep-{rwmh,mala,hmc[(L)]} or fixed-{rwmh,mala,hmc[(L)]})");
  }
  return spec;
}

Criterion parse_criterion(const std::string& name) {
  if (name == "symmetric") return Criterion::symmetric;
  if (name == "asymmetric") return Criterion::asymmetric;
  throw ConfigError("unknown criterion '" + name + "' (expected symmetric or asymmetric)");
}

std::string config_digest(const ExperimentConfig& c) {
  std::string repr = c.target + "|" + c.sampler + "|" + c.criterion + "|";
  for (double t : c.theta0) repr += fmt_double(t) + ",";
  repr += "|" + std::to_string(c.iterations) + "|" + std::to_string(c.rounds) + "|" +
          std::to_string(c.seed) + "|" + c.ref + "|" + fmt_double(c.alpha) + "|" +
          std::to_string(c.hmc_steps) + "|";
  for (double n : c.norms) repr += fmt_double(n) + ",";
  repr += "|" + std::to_string(c.replicates);

  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char byte : repr) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Eigen::VectorXd initial_point(const Target& target, Rng& rng) {
  if (target.has_exact_sampler()) return target.exact_draw(rng);
  return Eigen::VectorXd::Zero(target.dim());
}

CostModel cost_model_for(const std::string& target_name, double alpha_override) {
  if (alpha_override >= 0.0) return CostModel{alpha_override};
  if (const auto table_alpha = cost_alpha_for(target_name)) return CostModel{*table_alpha};
  return CostModel{1.0};
}

CellResult run_sweep_cell(const std::string& target_name, const std::string& data_dir,
                          const SamplerSpec& spec, Criterion criterion, double theta0,
                          long long iterations, std::uint64_t seed, std::uint64_t stream,
                          double alpha_override, const ReferenceDistribution* reference) {
  Target target = make_target(target_name, data_dir);
  Rng rng(seed, stream);
  const RunOutput out = run_chain(target, spec, criterion, theta0, iterations, rng);

  CellResult cell;
  cell.sampler = spec.canonical_name();
  cell.theta0 = theta0;
  cell.summary = summarize(out.records, cost_model_for(target_name, alpha_override));
  if (reference) cell.ksess_value = compute_min_ksess(out.trace, *reference);
  return cell;
}

void run_sample(const ExperimentConfig& config) {
  Target target = make_target(config.target, config.data_dir);
  const SamplerSpec spec = parse_sampler(config.sampler, config.hmc_steps);
  const Criterion criterion = parse_criterion(config.criterion);
  if (config.theta0.empty()) throw ConfigError("sample: need a theta0 value");
  if (config.iterations < 0) throw ConfigError("sample: iterations must be >= 0");
  const double theta0 = config.theta0.front();

  Rng rng(config.seed, 0);
  const RunOutput out = run_chain(target, spec, criterion, theta0, config.iterations, rng);

  const std::string comment = std::string("autostep v") + library_version +
                              " config=" + config_digest(config) +
                              " seed=" + std::to_string(config.seed);
  write_trace_csv(config.out, comment, target.dim(), out.trace, out.records);

  CsvWriter summary_csv(derived_path(config.out, "summary"), comment, summary_header());
  if (!out.records.empty()) {
    const CostModel model = cost_model_for(config.target, config.alpha);
    const RunSummary s = summarize(out.records, model);
    double ksess_value = -1.0;
    if (const auto ref = resolve_reference(config.ref, target))
      ksess_value = compute_min_ksess(out.trace, *ref);
    summary_csv.row(summary_row(spec.canonical_name(), config.target,
                                spec.autostep ? criterion_name(criterion) : "-", theta0,
                                config.seed, s, model.alpha, ksess_value));
  }
}

void run_sweep(const ExperimentConfig& config) {
  if (config.theta0.empty()) throw ConfigError("sweep: need a non-empty theta0 list");
  if (config.iterations <= 0) throw ConfigError("sweep: iterations must be positive");
  Target probe = make_target(config.target, config.data_dir);
  const SamplerSpec base = parse_sampler(config.sampler, config.hmc_steps);
  const Criterion criterion = parse_criterion(config.criterion);
  const std::optional<ReferenceDistribution> reference =
      resolve_reference(config.ref, probe);

  SamplerSpec autostep_spec = base, fixed_spec = base;
  autostep_spec.autostep = true;
  fixed_spec.autostep = false;

  const std::size_t cells = config.theta0.size() * 2;
  std::vector<CellResult> results(cells);
  parallel_for(cells, config.threads, [&](std::size_t i) {
    const std::size_t ti = i / 2;
    const SamplerSpec& spec = (i % 2 == 0) ? autostep_spec : fixed_spec;
    results[i] = run_sweep_cell(config.target, config.data_dir, spec, criterion,
                                config.theta0[ti], config.iterations, config.seed, i,
                                config.alpha, reference ? &*reference : nullptr);
  });

  const std::string comment = std::string("autostep v") + library_version +
                              " config=" + config_digest(config) +
                              " seed=" + std::to_string(config.seed);
  CsvWriter writer(config.out, comment, summary_header());
  const double alpha = cost_model_for(config.target, config.alpha).alpha;
  for (std::size_t i = 0; i < cells; ++i) {
    const bool is_autostep = i % 2 == 0;
    writer.row(summary_row(results[i].sampler, config.target,
                           is_autostep ? criterion_name(criterion) : "-", results[i].theta0,
                           config.seed, results[i].summary, alpha, results[i].ksess_value));
  }
}

void run_tune(const ExperimentConfig& config) {
  if (config.rounds < 1) throw ConfigError("tune: rounds must be >= 1");
  if (config.theta0.empty()) throw ConfigError("tune: need a theta0 value");
  Target target = make_target(config.target, config.data_dir);
  const SamplerSpec spec = parse_sampler(config.sampler, config.hmc_steps);
  if (!spec.autostep) throw ConfigError("tune: only autostep samplers are tunable");

  KernelConfig kernel;
  kernel.theta0 = config.theta0.front();
  kernel.criterion = parse_criterion(config.criterion);
  kernel.family = spec.involution();

  Rng rng(config.seed, 0);
  Eigen::VectorXd x0 = initial_point(target, rng);
  const TunedRun run = run_tuned(std::move(x0), RoundSchedule{config.rounds}, target,
                                 kernel, rng);

  const std::string comment = std::string("autostep v") + library_version +
                              " config=" + config_digest(config) +
                              " seed=" + std::to_string(config.seed);

  std::vector<std::string> header = {"round", "theta0", "cost_per_iter"};
  for (int j = 1; j <= target.dim(); ++j) header.push_back("m_hat_" + std::to_string(j));
  header.emplace_back("acceptance");
  CsvWriter history(config.out, comment, header);
  std::vector<std::string> row(header.size());
  for (const RoundRecord& rr : run.history) {
    std::size_t c = 0;
    row[c++] = std::to_string(rr.round);
    row[c++] = fmt_double(rr.theta0);
    row[c++] = fmt_double(rr.mean_selector_evals);
    for (int j = 0; j < target.dim(); ++j) row[c++] = fmt_double(rr.m_hat_sqrt_diag[j]);
    row[c++] = fmt_double(rr.acceptance);
    history.row(row);
  }

  write_trace_csv(derived_path(config.out, "trace"), comment, target.dim(),
                  run.final_trace, run.final_records);
}

void run_acceptance_profile(const ExperimentConfig& config) {
  Target target = make_target(config.target, config.data_dir);
  if (!target.has_exact_sampler())
    throw ConfigError("acceptance-profile: target '" + config.target +
                      "' has no exact sampler");
  const SamplerSpec spec = parse_sampler(config.sampler, config.hmc_steps);
  if (!spec.autostep)
    throw ConfigError("acceptance-profile: only autostep samplers are profiled");
  if (config.theta0.empty()) throw ConfigError("acceptance-profile: need a theta0 value");

  std::vector<double> norms = config.norms;
  if (norms.empty())
    for (int k = -5; k <= 2; ++k) norms.push_back(std::pow(10.0, k));

  KernelConfig kernel;
  kernel.theta0 = config.theta0.front();
  kernel.family = spec.involution();

  const Criterion criteria[] = {Criterion::symmetric, Criterion::asymmetric};
  const auto rows = acceptance_probability_profile(norms, target, kernel, criteria,
                                                   config.replicates, config.seed);

  const std::string comment = std::string("autostep v") + library_version +
                              " config=" + config_digest(config) +
                              " seed=" + std::to_string(config.seed);
  CsvWriter writer(config.out, comment, {"norm", "criterion", "acceptance", "replicates"});
  for (const auto& r : rows)
    writer.row(std::vector<std::string>{fmt_double(r.norm), criterion_name(r.criterion),
                                        fmt_double(r.acceptance),
                                        std::to_string(r.replicates)});
}

void run_ksess_file(const ExperimentConfig& config) {
  if (config.trace.empty()) throw ConfigError("ksess: need a trace file (--trace)");
  const CsvTable table = read_csv(config.trace);

  // Use the x1..xd columns when present (sample-trace schema), otherwise
  // treat every column as a coordinate.
  std::vector<int> coord_cols;
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (table.header[j].size() >= 2 && table.header[j][0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(table.header[j][1])))
      coord_cols.push_back(static_cast<int>(j));
  if (coord_cols.empty())
    for (std::size_t j = 0; j < table.header.size(); ++j)
      coord_cols.push_back(static_cast<int>(j));

  Eigen::MatrixXd trace(table.values.rows(), static_cast<Eigen::Index>(coord_cols.size()));
  for (std::size_t j = 0; j < coord_cols.size(); ++j)
    trace.col(static_cast<Eigen::Index>(j)) = table.values.col(coord_cols[j]);

  std::optional<ReferenceDistribution> reference;
  if (!config.ref.empty()) {
    const CsvTable ref_table = read_csv(config.ref);
    if (ref_table.values.rows() < 100000)
      throw ConfigError("ksess: reference sample needs at least 1e5 rows");
    if (ref_table.values.cols() < trace.cols())
      throw ConfigError("ksess: reference covers fewer coordinates than the trace");
    reference = ReferenceDistribution::from_sample(ref_table.values);
  } else {
    Target target = make_target(config.target, config.data_dir);
    reference = resolve_reference("", target);
    if (!reference || reference->dims() < trace.cols())
      throw ConfigError("ksess: target '" + config.target +
                        "' has no full analytic reference; supply --ref");
  }

  const std::string comment = std::string("autostep v") + library_version +
                              " config=" + config_digest(config) +
                              " seed=" + std::to_string(config.seed);
  CsvWriter writer(config.out, comment, {"coordinate", "ksess"});
  double min_value = std::numeric_limits<double>::infinity();
  std::vector<double> column(static_cast<std::size_t>(trace.rows()));
  for (Eigen::Index j = 0; j < trace.cols(); ++j) {
    Eigen::VectorXd::Map(column.data(), trace.rows()) = trace.col(j);
    double value = 0.0;
    try {
      value = ksess(column, reference->cdf_fn(static_cast<int>(j)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("ksess: ") + e.what());
    }
    min_value = std::min(min_value, value);
    writer.row(std::vector<std::string>{std::to_string(j + 1), fmt_double(value)});
  }
  writer.row(std::vector<std::string>{"min", fmt_double(min_value)});
}

}  // namespace autostep
