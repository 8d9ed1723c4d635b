#include "perconoise/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "perconoise/discretize.hpp"
#include "perconoise/flood.hpp"
#include "perconoise/noise.hpp"
#include "perconoise/oracle_suite.hpp"
#include "perconoise/parallel.hpp"
#include "perconoise/sampling.hpp"

namespace perconoise {

Estimate crossing_probability(double N, double lambda, int replicates, std::uint64_t seed,
                              int threads) {
  if (replicates < 1) throw std::invalid_argument("crossing_probability: replicates >= 1");
  const Rect rect = Rect::centered(N, N);
  const Rect region = rect.padded(1.0);
  std::vector<std::uint8_t> hit(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    const PointSet eta = sample_poisson(region, lambda, rng);
    hit[i] = occupied_horizontal_crossing(eta.points, rect);
  });
  std::uint64_t total = 0;
  for (std::uint8_t h : hit) total += h;
  Estimate e = binomial_proportion(total, replicates);
  e.seed = seed;
  return e;
}

LambdaCResult estimate_lambda_c(double N, int replicates_per_probe, double tol,
                                std::uint64_t seed, int threads, double bracket_lo,
                                double bracket_hi) {
  if (!(tol > 0.0)) throw std::invalid_argument("estimate_lambda_c: tol must be positive");
  LambdaCResult out;

  auto probe = [&](double lambda, std::uint64_t probe_id) {
    Estimate e = crossing_probability(N, lambda, replicates_per_probe,
                                      seed ^ (0x51ED2700ULL + probe_id), threads);
    out.probes.push_back({lambda, e});
    return e;
  };

  std::uint64_t id = 0;
  const Estimate lo_est = probe(bracket_lo, ++id);
  const Estimate hi_est = probe(bracket_hi, ++id);
  if (!(lo_est.value < 0.5 && hi_est.value > 0.5))
    throw std::runtime_error("estimate_lambda_c: initial interval does not bracket 1/2");

  double lo = bracket_lo, hi = bracket_hi;
  double p_lo = lo_est.value, p_hi = hi_est.value;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const Estimate e = probe(mid, ++id);
    if (e.value < 0.5) {
      lo = mid;
      p_lo = e.value;
    } else {
      hi = mid;
      p_hi = e.value;
    }
  }

  Estimate lam;
  lam.value = 0.5 * (lo + hi);
  lam.replicates = replicates_per_probe;
  lam.seed = seed;
  // Statistical half-width: probe noise divided by the local slope of the
  // crossing curve, plus the bracket itself.
  const double slope = std::max((p_hi - p_lo) / std::max(hi - lo, 1e-12), 1e-6);
  const double probe_sigma =
      std::sqrt(0.25 / replicates_per_probe);  // worst-case binomial sd at 1/2
  const double half = (hi - lo) / 2.0 + 1.959963984540054 * probe_sigma / slope;
  lam.std_error = probe_sigma / slope;
  lam.ci_lo = lam.value - half;
  lam.ci_hi = lam.value + half;
  out.lambda_hat = lam;
  return out;
}

Estimate noise_covariance(double N, double lambda, double epsilon, int replicates,
                          NoiseMode mode, double p, std::uint64_t seed, int threads) {
  if (replicates < 4) throw std::invalid_argument("noise_covariance: replicates >= 4");
  if (mode == NoiseMode::two_stage && !(epsilon < 1.0 - p))
    throw std::invalid_argument("noise_covariance: two_stage requires epsilon < 1 - p");
  const Rect rect = Rect::centered(N, N);
  const Rect region = rect.padded(1.0);

  std::vector<double> x(replicates), y(replicates);
  parallel_for(replicates, threads, [&](std::size_t i) {
    RngStream rng(seed, i);
    if (mode == NoiseMode::continuum) {
      const NoisyPointPair pair = coupled_pair_continuum(lambda, epsilon, region, rng);
      x[i] = occupied_horizontal_crossing(pair.before.points, rect);
      y[i] = occupied_horizontal_crossing(pair.after.points, rect);
    } else {
      const TwoStageNoisyPair pair = coupled_pair_two_stage(lambda, p, epsilon, region, rng);
      x[i] = occupied_horizontal_crossing(pair.before.points, rect);
      y[i] = occupied_horizontal_crossing(pair.after.points, rect);
    }
  });
  Estimate e = paired_covariance(x, y);
  e.seed = seed;
  return e;
}

Estimate variance_across_B(double N, double p, double lambda_c, int outer, int inner,
                           std::uint64_t seed, int threads) {
  if (outer < 2 || inner < 2)
    throw std::invalid_argument("variance_across_B: need outer >= 2 and inner >= 2");
  const Rect rect = Rect::centered(N, N);
  const Rect region = rect.padded(1.0);

  std::vector<double> phat(outer), inner_var(outer);
  parallel_for(outer, threads, [&](std::size_t o) {
    RngStream rng(seed, o);
    const PointSet B = sample_poisson(region, lambda_c / p, rng.fork(1));
    RngStream etas = rng.fork(2);
    int hits = 0;
    for (int j = 0; j < inner; ++j) {
      const std::vector<std::uint8_t> bits = p_subset_bits(B.size(), p, etas.fork(j + 1));
      std::vector<Vec2> eta;
      for (std::size_t t = 0; t < B.size(); ++t)
        if (bits[t]) eta.push_back(B.points[t]);
      hits += occupied_horizontal_crossing(eta, rect);
    }
    phat[o] = static_cast<double>(hits) / inner;
    // Unbiased estimate of p_o (1 - p_o) / inner, the MC noise of phat[o].
    inner_var[o] = phat[o] * (1.0 - phat[o]) / (inner - 1);
  });

  // Between-B variance minus the mean within-B noise.
  const double raw = sample_variance(phat);
  const double correction = mean(inner_var);

  Estimate e;
  e.value = raw - correction;
  e.replicates = outer;
  e.seed = seed;
  // Jackknife over outer replicates.
  std::vector<double> loo(outer);
  double sum = 0.0, sum_sq = 0.0, csum = 0.0;
  for (int o = 0; o < outer; ++o) {
    sum += phat[o];
    sum_sq += phat[o] * phat[o];
    csum += inner_var[o];
  }
  for (int o = 0; o < outer; ++o) {
    const double n1 = outer - 1;
    const double m1 = (sum - phat[o]) / n1;
    const double v1 = ((sum_sq - phat[o] * phat[o]) - n1 * m1 * m1) / (n1 - 1);
    loo[o] = v1 - (csum - inner_var[o]) / n1;
  }
  const double lm = mean(loo);
  double jk = 0.0;
  for (double v : loo) jk += (v - lm) * (v - lm);
  e.std_error = std::sqrt((outer - 1) / static_cast<double>(outer) * jk);
  e.ci_lo = e.value - 1.959963984540054 * e.std_error;
  e.ci_hi = e.value + 1.959963984540054 * e.std_error;
  return e;
}

std::vector<SweepRow> ns_exponent_sweep(const std::vector<double>& alphas,
                                        const std::vector<double>& n_grid, double lambda_c,
                                        int replicates, std::uint64_t seed, int threads) {
  if (alphas.empty() || n_grid.empty())
    throw std::invalid_argument("ns_exponent_sweep: grids must be non-empty");
  std::vector<SweepRow> rows;
  std::uint64_t salt = 0;
  for (double alpha : alphas) {
    double first_value = 0.0;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
      const double N = n_grid[gi];
      const double eps = std::min(std::pow(N, -alpha), 1.0);
      SweepRow row;
      row.alpha = alpha;
      row.N = N;
      row.epsilon = eps;
      row.covariance = noise_covariance(N, lambda_c, eps, replicates, NoiseMode::continuum,
                                        0.5, seed ^ (0xA11CEULL + ++salt), threads);
      if (gi == 0) first_value = row.covariance.value;
      row.consistent_with_vanishing = row.covariance.ci_lo < first_value / 2.0;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Spec parsing and experiment dispatch

ExperimentSpec ExperimentSpec::parse(std::istream& in) {
  ExperimentSpec spec;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    if (key == "kind")
      spec.kind = value;
    else
      spec.params[key] = value;
  }
  if (spec.kind.empty()) throw std::runtime_error("experiment spec: missing kind");
  return spec;
}

ExperimentSpec ExperimentSpec::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("experiment spec: cannot open " + path);
  return parse(in);
}

double ExperimentSpec::number(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::runtime_error("experiment spec: missing parameter " + key);
  return std::stod(it->second);
}

double ExperimentSpec::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long ExperimentSpec::integer(const std::string& key) const {
  return static_cast<long>(number(key));
}

long ExperimentSpec::integer_or(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::uint64_t ExperimentSpec::seed() const {
  auto it = params.find("seed");
  if (it == params.end()) throw std::runtime_error("experiment spec: missing seed");
  return std::stoull(it->second);
}

std::vector<double> ExperimentSpec::grid(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw std::runtime_error("experiment spec: missing grid " + key);
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::runtime_error("experiment spec: empty grid " + key);
  return out;
}

std::string ExperimentSpec::text_or(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class TableWriter {
 public:
  TableWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(const std::vector<double>& values) {
    if (values.size() != columns_.size()) throw std::logic_error("TableWriter: column mismatch");
    rows_.push_back(values);
  }

  void write(const std::string& base_path) const {
    std::ofstream csv(base_path + ".csv");
    for (std::size_t c = 0; c < columns_.size(); ++c)
      csv << columns_[c] << (c + 1 < columns_.size() ? "," : "");
    csv << '\n';
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c)
        csv << fmt17(row[c]) << (c + 1 < row.size() ? "," : "");
      csv << '\n';
    }
    std::ofstream jsonl(base_path + ".jsonl");
    for (const auto& row : rows_) {
      nlohmann::json j;
      for (std::size_t c = 0; c < row.size(); ++c) j[columns_[c]] = row[c];
      jsonl << j.dump() << '\n';
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

std::vector<double> estimate_row(const Estimate& e) {
  return {e.value, e.std_error, e.ci_lo, e.ci_hi, static_cast<double>(e.replicates),
          static_cast<double>(e.seed)};
}

const std::vector<std::string> kEstimateCols = {"estimate",   "std_error", "ci_lo",
                                                "ci_hi",      "replicates", "seed"};

std::vector<std::string> with_prefix(std::vector<std::string> pre) {
  for (const std::string& c : kEstimateCols) pre.push_back(c);
  return pre;
}

}  // namespace

void run_experiment(const ExperimentSpec& spec, const std::string& out_dir,
                    std::uint64_t seed_override, bool has_seed_override, int threads) {
  std::filesystem::create_directories(out_dir);
  const std::uint64_t seed = has_seed_override ? seed_override : spec.seed();
  const std::string base = out_dir + "/" + spec.text_or("out", spec.kind);

  if (spec.kind == "lambda_c_bisect") {
    const auto res = estimate_lambda_c(spec.number("N"), static_cast<int>(spec.integer("replicates")),
                                       spec.number_or("tol", 1e-3), seed, threads);
    TableWriter probes(with_prefix({"lambda"}));
    for (const auto& row : res.probes) {
      auto r = estimate_row(row.prob);
      r.insert(r.begin(), row.lambda);
      probes.add_row(r);
    }
    probes.write(base + "_probes");
    TableWriter final_tab(with_prefix({}));
    final_tab.add_row(estimate_row(res.lambda_hat));
    final_tab.write(base);
  } else if (spec.kind == "crossing_curve") {
    const auto lambdas = spec.grid("lambda_grid");
    const auto ns = spec.grid("N_grid");
    const int reps = static_cast<int>(spec.integer("replicates"));
    TableWriter tab(with_prefix({"n", "lambda"}));
    std::uint64_t salt = 0;
    for (double N : ns)
      for (double lam : lambdas) {
        auto r = estimate_row(crossing_probability(N, lam, reps, seed ^ ++salt, threads));
        r.insert(r.begin(), lam);
        r.insert(r.begin(), N);
        tab.add_row(r);
      }
    tab.write(base);
  } else if (spec.kind == "noise_curve") {
    const auto eps_grid = spec.grid("epsilon_grid");
    const double N = spec.number("N");
    const double lambda = spec.number("lambda");
    const int reps = static_cast<int>(spec.integer("replicates"));
    const std::string mode = spec.text_or("mode", "continuum");
    const double p = spec.number_or("p", 0.5);
    TableWriter tab(with_prefix({"n", "epsilon"}));
    std::uint64_t salt = 0;
    for (double eps : eps_grid) {
      auto r = estimate_row(noise_covariance(
          N, lambda, eps, reps, mode == "two_stage" ? NoiseMode::two_stage : NoiseMode::continuum,
          p, seed ^ ++salt, threads));
      r.insert(r.begin(), eps);
      r.insert(r.begin(), N);
      tab.add_row(r);
    }
    tab.write(base);
  } else if (spec.kind == "variance_across_B") {
    TableWriter tab(with_prefix({"n", "p"}));
    auto r = estimate_row(variance_across_B(spec.number("N"), spec.number("p"),
                                            spec.number("lambda_c"),
                                            static_cast<int>(spec.integer("outer")),
                                            static_cast<int>(spec.integer("inner")), seed, threads));
    r.insert(r.begin(), spec.number("p"));
    r.insert(r.begin(), spec.number("N"));
    tab.add_row(r);
    tab.write(base);
  } else if (spec.kind == "revealment_scan") {
    const auto ns = spec.grid("N_grid");
    const double p = spec.number("p");
    const double lambda_c = spec.number("lambda_c");
    const int reps = static_cast<int>(spec.integer("replicates"));
    TableWriter tab({"n", "max_revealment", "points_measured", "replicates", "seed"});
    std::uint64_t salt = 0;
    for (double N : ns) {
      RngStream rng(seed ^ ++salt, 0);
      const PointSet B =
          sample_poisson(Rect::centered(N + 2, N + 2), lambda_c / p, rng.fork(1));
      const auto est = revealment_estimate(B.points, p, N, RevealRegion::right_half, reps,
                                           rng.fork(2));
      tab.add_row({N, est.max_probability, static_cast<double>(est.point_index.size()),
                   static_cast<double>(reps), static_cast<double>(seed)});
    }
    tab.write(base);
  } else if (spec.kind == "one_arm_scan") {
    const auto ells = spec.grid("ell_grid");
    const double p = spec.number("p");
    const double lambda_c = spec.number("lambda_c");
    const int reps = static_cast<int>(spec.integer("replicates"));
    TableWriter tab({"ell", "one_arm_probability", "replicates", "seed"});
    std::uint64_t salt = 0;
    for (double ell : ells) {
      RngStream rng(seed ^ ++salt, 0);
      const Rect region = Rect::centered(4 * ell + 2, 4 * ell + 2);
      const PointSet B = sample_poisson(region, lambda_c / p, rng.fork(1));
      tab.add_row({ell, one_arm_probability(B.points, p, {0.0, 0.0}, ell, reps, rng.fork(2)),
                   static_cast<double>(reps), static_cast<double>(seed)});
    }
    tab.write(base);
  } else if (spec.kind == "ns_exponent_sweep") {
    const auto rows = ns_exponent_sweep(spec.grid("alphas"), spec.grid("N_grid"),
                                        spec.number("lambda_c"),
                                        static_cast<int>(spec.integer("replicates")), seed, threads);
    TableWriter tab(with_prefix({"alpha", "n", "epsilon", "consistent_with_vanishing"}));
    for (const auto& row : rows) {
      auto r = estimate_row(row.covariance);
      r.insert(r.begin(), row.consistent_with_vanishing ? 1.0 : 0.0);
      r.insert(r.begin(), row.epsilon);
      r.insert(r.begin(), row.N);
      r.insert(r.begin(), row.alpha);
      tab.add_row(r);
    }
    tab.write(base);
  } else if (spec.kind == "discretization_check") {
    const auto rep = coupled_crossing_compare(
        spec.number("lambda_c"), spec.number("p"), spec.number("a"), spec.number("b"),
        spec.number("delta"), static_cast<int>(spec.integer("replicates")),
        RngStream(seed, 0), threads);
    TableWriter tab({"delta", "replicates", "disagreements", "bad_events",
                     "unexplained_disagreements", "seed"});
    tab.add_row({spec.number("delta"), static_cast<double>(rep.replicates),
                 static_cast<double>(rep.disagreements), static_cast<double>(rep.bad_events),
                 static_cast<double>(rep.unexplained_disagreements),
                 static_cast<double>(seed)});
    tab.write(base);
  } else if (spec.kind == "oracle_suite") {
    std::ofstream out(base + ".txt");
    run_oracle_suite(out, threads);
  } else {
    throw std::runtime_error("run_experiment: unknown kind " + spec.kind);
  }
}

}  // namespace perconoise
