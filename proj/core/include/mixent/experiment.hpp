#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mixent/baselines.hpp"
#include "mixent/estimators.hpp"
#include "mixent/sdea.hpp"

namespace mixent {

struct ChannelSpec {
  enum class Family { Fir, Selective } family = Family::Fir;
  int n_t = 1;
  std::vector<double> taps;  // fir
  int memory = 0;            // selective
  std::uint64_t seed = 0;    // selective
};

struct ConstellationSpec {
  ConstellationKind kind = ConstellationKind::Binary;
  int size = 2;
};

struct MethodSpec {
  enum class Type { Truth, Dfs, Bfs, Sdea, Sa, Hd1, Bcjr, Gb, Seb };
  Type type = Type::Truth;
  std::string name;

  double alpha = 1.0;                   // dfs / sdea(dfs)
  std::uint64_t k = 1;                  // bfs / sdea(bfs)
  std::optional<std::uint64_t> budget;  // bfs node budget C0 resolved to k
  SearchMode sdea_search = SearchMode::Dfs;
  std::optional<double> gamma_l, gamma_h;       // linear, at rho_ref
  std::optional<double> delta_gamma, gamma_c;   // alternative threshold rule
  std::optional<double> rho_ref;                // linear; empty = rho_c
  std::uint64_t bcjr_n = 50000;
  std::optional<std::uint32_t> bcjr_q;
};

struct ExperimentConfig {
  int version = 1;
  ChannelSpec channel;
  ConstellationSpec constellation;
  std::vector<double> snr_db;
  std::vector<MethodSpec> methods;
  int n_d = 1;
  int n_n = 1;
  std::uint64_t seed = 0;
  std::uint64_t oracle_cap = 1u << 20;
  std::string output;       // default CSV path; may be empty
  std::string config_echo;  // serialized source for the sidecar
};

/// Parses and validates a version-1 JSON config. Throws ConfigError.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& json_text);

struct ResultRow {
  double snr_db = 0.0;
  std::string method;
  std::string params;
  std::optional<double> mi_bits_per_symbol;
  std::optional<double> mi_bits_total;
  std::optional<double> h_bits;
  BoundKind bound_kind = BoundKind::Approx;
  std::optional<double> mean_visited_nodes;
  std::optional<double> stderr_bits;
  std::uint64_t n_sentinels = 0;
  double wall_ms = 0.0;  // reported in the sidecar, not the CSV
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;  // 0 = default_thread_count()
  std::optional<std::vector<double>> snr_override;
  std::optional<std::string> method_filter;  // exact method-name match
  bool quiet = false;                        // suppress stderr progress
};

using RowSink = std::function<void(const ResultRow&)>;

/// Runs every (snr, method) cell in config order; per-SNR seeds derive from
/// the master seed by grid index so all methods at one SNR share streams.
/// Rows are handed to `sink` as they complete, in deterministic order.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const RunOptions& opts,
                                      const RowSink& sink = {});

void write_csv_header(std::ostream& os);
void write_csv_row(std::ostream& os, const ResultRow& row);
void write_metadata(std::ostream& os, const ExperimentConfig& config,
                    const RunOptions& opts, std::uint64_t seed_used,
                    const std::vector<ResultRow>& rows, double total_wall_ms);

struct SweepRow {
  double param;  // +inf encodes the unbounded endpoint
  std::optional<double> h_up_bits, h_lo_bits, h_lo_plus_bits;
  double mean_visited_nodes = 0.0;
};

/// Convergence sweep at a single SNR point over alpha (DFS) or k (BFS).
std::vector<SweepRow> sweep_convergence(const ExperimentConfig& config,
                                        const std::string& param,
                                        const std::vector<double>& grid,
                                        const RunOptions& opts);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Builds the channel / constellation described by a config.
ChannelInstance make_channel(const ChannelSpec& spec);
Constellation make_constellation(const ConstellationSpec& spec);

}  // namespace mixent
