#include "mixent/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mixent/errors.hpp"
#include "mixent/logsum.hpp"

namespace mixent {

namespace {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

MethodSpec parse_method(const json& m) {
  if (!m.is_object() || !m.contains("name"))
    throw ConfigError("method entries need a \"name\"");
  MethodSpec spec;
  spec.name = m.at("name").get<std::string>();

  auto require_positive = [&](const char* field, double value) {
    if (!(value > 0.0))
      throw ConfigError(std::string(field) + " must be positive in method " + spec.name);
  };

  if (spec.name == "truth") {
    spec.type = MethodSpec::Type::Truth;
  } else if (spec.name == "dfs") {
    spec.type = MethodSpec::Type::Dfs;
    spec.alpha = m.value("alpha", 1.0);
    if (!(spec.alpha >= 1.0)) throw ConfigError("dfs requires alpha >= 1");
  } else if (spec.name == "bfs") {
    spec.type = MethodSpec::Type::Bfs;
    if (m.contains("budget")) {
      spec.budget = m.at("budget").get<std::uint64_t>();
    } else {
      spec.k = m.value("k", std::uint64_t{1});
      if (spec.k < 1) throw ConfigError("bfs requires k >= 1");
    }
  } else if (spec.name == "sdea") {
    spec.type = MethodSpec::Type::Sdea;
    const std::string search = m.value("search", std::string("dfs"));
    if (search == "dfs") {
      spec.sdea_search = SearchMode::Dfs;
      spec.alpha = m.value("alpha", 1.0);
      if (!(spec.alpha >= 1.0)) throw ConfigError("sdea requires alpha >= 1");
    } else if (search == "bfs") {
      spec.sdea_search = SearchMode::Bfs;
      spec.k = m.value("k", std::uint64_t{1});
      if (spec.k < 1) throw ConfigError("sdea requires k >= 1");
    } else {
      throw ConfigError("sdea search must be dfs or bfs");
    }
    const bool explicit_gamma = m.contains("gamma_l_db") || m.contains("gamma_l");
    if (explicit_gamma) {
      const double gl = m.contains("gamma_l_db")
                            ? db_to_linear(m.at("gamma_l_db").get<double>())
                            : m.at("gamma_l").get<double>();
      const double gh = m.contains("gamma_h_db")
                            ? db_to_linear(m.at("gamma_h_db").get<double>())
                            : m.at("gamma_h").get<double>();
      if (gl > gh) throw ConfigError("sdea requires gamma_l <= gamma_h");
      spec.gamma_l = gl;
      spec.gamma_h = gh;
    } else if (m.contains("delta_gamma")) {
      spec.delta_gamma = m.at("delta_gamma").get<double>();
      if (*spec.delta_gamma < 0) throw ConfigError("delta_gamma must be >= 0");
      if (m.contains("gamma_c")) spec.gamma_c = m.at("gamma_c").get<double>();
    } else {
      throw ConfigError("sdea needs gamma_l(_db)/gamma_h(_db) or delta_gamma");
    }
    if (m.contains("rho_ref_db")) {
      spec.rho_ref = db_to_linear(m.at("rho_ref_db").get<double>());
      require_positive("rho_ref", *spec.rho_ref);
    }
  } else if (spec.name == "sa") {
    spec.type = MethodSpec::Type::Sa;
  } else if (spec.name == "hd1") {
    spec.type = MethodSpec::Type::Hd1;
  } else if (spec.name == "bcjr") {
    spec.type = MethodSpec::Type::Bcjr;
    spec.bcjr_n = m.value("n", std::uint64_t{50000});
    if (spec.bcjr_n < 1000) throw ConfigError("bcjr requires n >= 1000");
    if (m.contains("q")) {
      spec.bcjr_q = m.at("q").get<std::uint32_t>();
      if (*spec.bcjr_q < 1) throw ConfigError("bcjr q must be >= 1");
    }
  } else if (spec.name == "gb") {
    spec.type = MethodSpec::Type::Gb;
  } else if (spec.name == "seb") {
    spec.type = MethodSpec::Type::Seb;
  } else {
    throw ConfigError("unknown method: " + spec.name);
  }
  return spec;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  cfg.config_echo = j.dump(2);
  try {
    cfg.version = j.value("version", 0);
    if (cfg.version != 1) throw ConfigError("config version must be 1");

    const json& ch = j.at("channel");
    const std::string family = ch.at("family").get<std::string>();
    cfg.channel.n_t = ch.at("n_t").get<int>();
    if (cfg.channel.n_t < 1) throw ConfigError("n_t must be >= 1");
    if (family == "fir") {
      cfg.channel.family = ChannelSpec::Family::Fir;
      cfg.channel.taps = ch.at("taps").get<std::vector<double>>();
      if (cfg.channel.taps.empty()) throw ConfigError("fir channel needs taps");
    } else if (family == "selective") {
      cfg.channel.family = ChannelSpec::Family::Selective;
      cfg.channel.memory = ch.at("memory").get<int>();
      if (cfg.channel.memory < 0 || cfg.channel.memory > cfg.channel.n_t - 1)
        throw ConfigError("selective channel needs 0 <= memory <= n_t-1");
      cfg.channel.seed = ch.value("seed", std::uint64_t{0});
    } else {
      throw ConfigError("channel family must be fir or selective");
    }

    const json& cons = j.at("constellation");
    cfg.constellation.kind =
        constellation_kind_from_string(cons.at("kind").get<std::string>());
    cfg.constellation.size = cons.at("size").get<int>();

    cfg.snr_db = j.at("snr_db").get<std::vector<double>>();
    cfg.n_d = j.at("n_d").get<int>();
    cfg.n_n = j.at("n_n").get<int>();
    if (cfg.n_d < 1 || cfg.n_n < 1) throw ConfigError("n_d and n_n must be >= 1");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.oracle_cap = j.value("oracle_cap", std::uint64_t{1} << 20);
    cfg.output = j.value("output", std::string());

    for (const json& m : j.at("methods")) cfg.methods.push_back(parse_method(m));
    if (cfg.methods.empty()) throw ConfigError("methods list is empty");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }

  // Validate the constellation eagerly so errors surface as config errors.
  try {
    make_constellation(cfg.constellation);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ChannelInstance make_channel(const ChannelSpec& spec) {
  if (spec.family == ChannelSpec::Family::Fir)
    return fir_channel(spec.taps, spec.n_t);
  Rng rng(spec.seed, stream::kChannel, 0, 0);
  return selective_channel(spec.n_t, spec.memory, rng);
}

Constellation make_constellation(const ConstellationSpec& spec) {
  return make_constellation(spec.kind, spec.size);
}

namespace {

struct MethodContext {
  const ExperimentConfig& config;
  const ChannelInstance& channel;
  const Constellation& constellation;
  std::uint64_t master_seed;
  unsigned threads;
};

void append_estimate_rows(std::vector<ResultRow>& rows, const MethodContext& ctx,
                          double snr_db, const MethodSpec& method,
                          const std::string& params, const EntropyEstimate& est) {
  const int nt = ctx.channel.dim();
  for (const BoundValue& bv : est.values) {
    ResultRow row;
    row.snr_db = snr_db;
    row.method = method.name;
    row.params = params;
    row.bound_kind = bv.kind;
    row.h_bits = bv.h_bits;
    row.mi_bits_total = bv.mi_bits;
    row.mi_bits_per_symbol = bv.mi_bits / nt;
    row.stderr_bits = bv.stderr_bits;
    row.mean_visited_nodes = est.mean_visited_nodes;
    row.n_sentinels = est.n_sentinels;
    rows.push_back(std::move(row));
  }
}

std::vector<ResultRow> run_method_at_snr(const MethodContext& ctx,
                                         const MethodSpec& method,
                                         std::size_t snr_index, double snr_db) {
  const double rho = db_to_linear(snr_db);
  const std::uint64_t seed = derive_seed(ctx.master_seed, snr_index);
  const McOptions mc_opts{ctx.config.n_d, ctx.config.n_n, seed, ctx.threads};
  const int nt = ctx.channel.dim();
  const int mc = ctx.constellation.size;
  std::vector<ResultRow> rows;

  switch (method.type) {
    case MethodSpec::Type::Truth: {
      try {
        const EntropyEstimate est = true_entropy_oracle(
            ctx.channel, ctx.constellation, rho, mc_opts, ctx.config.oracle_cap);
        append_estimate_rows(rows, ctx, snr_db, method, "", est);
      } catch (const SizeCapError& e) {
        std::cerr << "warning: " << e.what() << "\n";
        ResultRow row;
        row.snr_db = snr_db;
        row.method = method.name;
        row.params = "unavailable=size_cap";
        row.bound_kind = BoundKind::Exact;
        rows.push_back(std::move(row));
      }
      break;
    }
    case MethodSpec::Type::Dfs: {
      const EntropyEstimate est = mc_entropy(ctx.channel, ctx.constellation, rho,
                                             SearchSpec::dfs(method.alpha), mc_opts);
      append_estimate_rows(rows, ctx, snr_db, method,
                           "alpha=" + format_number(method.alpha), est);
      break;
    }
    case MethodSpec::Type::Bfs: {
      std::uint64_t k = method.k;
      std::string params;
      if (method.budget) {
        k = k_for_budget(*method.budget, mc, nt);
        params = "budget=" + std::to_string(*method.budget) + ";k=" + std::to_string(k);
      } else {
        params = "k=" + std::to_string(k);
      }
      const EntropyEstimate est = mc_entropy(ctx.channel, ctx.constellation, rho,
                                             SearchSpec::bfs(k), mc_opts);
      append_estimate_rows(rows, ctx, snr_db, method, params, est);
      break;
    }
    case MethodSpec::Type::Sdea: {
      ThresholdSpec th{};
      std::string params;
      if (method.gamma_l) {
        th.gamma_l = *method.gamma_l;
        th.gamma_h = *method.gamma_h;
      } else {
        const ThresholdPair pair = choose_thresholds(
            ctx.channel.lambda_sq, *method.delta_gamma, method.gamma_c);
        th.gamma_l = pair.gamma_l;
        th.gamma_h = pair.gamma_h;
      }
      th.rho_ref = method.rho_ref ? *method.rho_ref
                                  : rho_c(ctx.channel, ctx.constellation);
      const SearchSpec search = method.sdea_search == SearchMode::Dfs
                                    ? SearchSpec::dfs(method.alpha)
                                    : SearchSpec::bfs(method.k);
      params = (search.mode == SearchMode::Dfs
                    ? "alpha=" + format_number(method.alpha)
                    : "k=" + std::to_string(method.k)) +
               ";gamma_l=" + format_number(th.gamma_l) +
               ";gamma_h=" + format_number(th.gamma_h) +
               ";rho_ref=" + format_number(th.rho_ref);
      const EntropyEstimate est =
          sdea_mi(ctx.channel, ctx.constellation, rho, th, search, mc_opts);
      append_estimate_rows(rows, ctx, snr_db, method, params, est);
      break;
    }
    case MethodSpec::Type::Sa: {
      const EntropyEstimate est = sa_mi(ctx.channel, ctx.constellation, rho, mc_opts);
      append_estimate_rows(rows, ctx, snr_db, method, "", est);
      break;
    }
    case MethodSpec::Type::Hd1: {
      const EntropyEstimate est = hd1_mi(ctx.channel, ctx.constellation, rho, mc_opts);
      append_estimate_rows(rows, ctx, snr_db, method, "", est);
      break;
    }
    case MethodSpec::Type::Bcjr: {
      if (ctx.config.channel.family != ChannelSpec::Family::Fir)
        throw ConfigError("bcjr applies to fir channels only");
      BcjrOptions opts;
      opts.n = method.bcjr_n;
      opts.state_cap = method.bcjr_q;
      opts.seed = derive_seed(seed, 0xbc);
      opts.report_stages = nt;
      const BcjrResult res =
          bcjr_mi(ctx.config.channel.taps, ctx.constellation, rho, opts);
      ResultRow row;
      row.snr_db = snr_db;
      row.method = method.name;
      row.params = "n=" + std::to_string(method.bcjr_n) +
                   (method.bcjr_q ? ";q=" + std::to_string(*method.bcjr_q)
                                  : std::string(";q=full"));
      row.bound_kind = method.bcjr_q ? BoundKind::Upper : BoundKind::Exact;
      row.mi_bits_per_symbol = res.mi_bits_per_symbol;
      row.mi_bits_total = res.mi_bits_per_symbol * nt;
      row.mean_visited_nodes = static_cast<double>(res.visited_states_report);
      rows.push_back(std::move(row));
      break;
    }
    case MethodSpec::Type::Gb: {
      ResultRow row;
      row.snr_db = snr_db;
      row.method = method.name;
      row.bound_kind = BoundKind::Trivial;
      const double gb = gaussian_bound_bits(ctx.channel, rho);
      row.mi_bits_total = gb;
      row.mi_bits_per_symbol = gb / nt;
      rows.push_back(std::move(row));
      break;
    }
    case MethodSpec::Type::Seb: {
      ResultRow row;
      row.snr_db = snr_db;
      row.method = method.name;
      row.bound_kind = BoundKind::Trivial;
      const double seb = source_entropy_bound_bits(mc, nt);
      row.mi_bits_total = seb;
      row.mi_bits_per_symbol = seb / nt;
      rows.push_back(std::move(row));
      break;
    }
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      const RunOptions& opts, const RowSink& sink) {
  const ChannelInstance channel = make_channel(config.channel);
  const Constellation constellation = make_constellation(config.constellation);
  const std::uint64_t master_seed = opts.seed.value_or(config.seed);
  const std::vector<double>& snrs =
      opts.snr_override ? *opts.snr_override : config.snr_db;

  const MethodContext ctx{config, channel, constellation, master_seed, opts.threads};

  std::vector<ResultRow> all_rows;
  for (std::size_t si = 0; si < snrs.size(); ++si) {
    for (const MethodSpec& method : config.methods) {
      if (opts.method_filter && method.name != *opts.method_filter) continue;
      const auto start = std::chrono::steady_clock::now();
      std::vector<ResultRow> rows = run_method_at_snr(ctx, method, si, snrs[si]);
      const double wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                    start)
              .count();
      for (ResultRow& row : rows) {
        row.wall_ms = wall_ms;
        if (sink) sink(row);
        all_rows.push_back(std::move(row));
      }
      if (!opts.quiet)
        std::cerr << "snr " << snrs[si] << " dB  " << method.name << "  "
                  << wall_ms << " ms\n";
    }
  }
  return all_rows;
}

void write_csv_header(std::ostream& os) {
  os << "snr_db,method,params,mi_bits_per_symbol,mi_bits_total,h_bits,"
        "bound_kind,mean_visited_nodes,stderr,n_sentinels\n";
}

void write_csv_row(std::ostream& os, const ResultRow& row) {
  os << format_number(row.snr_db) << ',' << row.method << ',' << row.params << ','
     << optional_field(row.mi_bits_per_symbol) << ','
     << optional_field(row.mi_bits_total) << ',' << optional_field(row.h_bits)
     << ',' << to_string(row.bound_kind) << ','
     << optional_field(row.mean_visited_nodes) << ','
     << optional_field(row.stderr_bits) << ',' << row.n_sentinels << '\n';
}

void write_metadata(std::ostream& os, const ExperimentConfig& config,
                    const RunOptions& opts, std::uint64_t seed_used,
                    const std::vector<ResultRow>& rows, double total_wall_ms) {
  json meta;
  meta["tool"] = "mixent 0.1.0";
  meta["seed_used"] = seed_used;
  meta["threads"] = opts.threads;
  meta["total_wall_ms"] = total_wall_ms;
  meta["config"] = json::parse(config.config_echo);
  json timings = json::array();
  for (const ResultRow& row : rows) {
    timings.push_back({{"snr_db", row.snr_db},
                       {"method", row.method},
                       {"params", row.params},
                       {"bound_kind", to_string(row.bound_kind)},
                       {"wall_ms", row.wall_ms}});
  }
  meta["rows"] = std::move(timings);
  os << meta.dump(2) << '\n';
}

std::vector<SweepRow> sweep_convergence(const ExperimentConfig& config,
                                        const std::string& param,
                                        const std::vector<double>& grid,
                                        const RunOptions& opts) {
  if ((opts.snr_override ? opts.snr_override->size() : config.snr_db.size()) != 1)
    throw ConfigError("sweep_convergence needs exactly one SNR point");
  if (param != "alpha" && param != "k")
    throw ConfigError("sweep param must be alpha or k");

  const ChannelInstance channel = make_channel(config.channel);
  const Constellation constellation = make_constellation(config.constellation);
  const double snr_db =
      opts.snr_override ? opts.snr_override->front() : config.snr_db.front();
  const double rho = db_to_linear(snr_db);
  const std::uint64_t seed = derive_seed(opts.seed.value_or(config.seed), 0);
  const McOptions mc_opts{config.n_d, config.n_n, seed, opts.threads};

  std::vector<SweepRow> rows;
  for (double value : grid) {
    SearchSpec spec;
    if (param == "alpha") {
      spec = SearchSpec::dfs(value);
    } else {
      std::uint64_t k;
      if (std::isinf(value)) {
        k = 1;
        for (int i = 0; i < channel.dim() - 1; ++i)
          k *= static_cast<std::uint64_t>(constellation.size);
      } else {
        k = static_cast<std::uint64_t>(value);
        if (k < 1) throw ConfigError("sweep k grid values must be >= 1");
      }
      spec = SearchSpec::bfs(k);
    }
    const EntropyEstimate est =
        mc_entropy(channel, constellation, rho, spec, mc_opts);
    SweepRow row;
    row.param = value;
    if (const BoundValue* v = est.find(BoundKind::Upper)) row.h_up_bits = v->h_bits;
    if (const BoundValue* v = est.find(BoundKind::Lower)) row.h_lo_bits = v->h_bits;
    if (const BoundValue* v = est.find(BoundKind::LowerPlus))
      row.h_lo_plus_bits = v->h_bits;
    row.mean_visited_nodes = est.mean_visited_nodes;
    rows.push_back(row);
    if (!opts.quiet)
      std::cerr << "sweep " << param << "=" << value << " done\n";
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "param,h_up_bits,h_lo_bits,h_lo_plus_bits,mean_visited_nodes\n";
  for (const SweepRow& row : rows) {
    os << (std::isinf(row.param) ? "inf" : format_number(row.param)) << ','
       << optional_field(row.h_up_bits) << ',' << optional_field(row.h_lo_bits)
       << ',' << optional_field(row.h_lo_plus_bits) << ','
       << format_number(row.mean_visited_nodes) << '\n';
  }
}

}  // namespace mixent
