// chac: command-line front end for adjacency-constrained Ward clustering.
//
// Exit codes: 0 success, 2 bad arguments, 3 malformed or unreadable input,
// 4 numeric failure.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chac/chac.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kBadArgs = 2;
constexpr int kBadInput = 3;
constexpr int kNumeric = 4;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw chac::input_error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  return out;
}

std::string format_real(double v) {
  std::string s = chac::io::format_height(v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

/// Fills options the user left unset from a manifest.
struct ManifestFill {
  CLI::App* app;
  const chac::io::Manifest* manifest;

  template <typename T>
  void operator()(const std::string& flag, const std::string& key, T& target) const {
    if (manifest == nullptr || app->count(flag) > 0) return;
    const auto it = manifest->find(key);
    if (it == manifest->end() || it->second.empty()) return;
    std::istringstream ss(it->second);
    if constexpr (std::is_same_v<T, std::string>) {
      target = it->second;
    } else if constexpr (std::is_same_v<T, bool>) {
      target = it->second == "true" || it->second == "1";
    } else {
      if (!(ss >> target)) {
        throw chac::input_error("manifest key '" + key + "' has bad value '" + it->second + "'");
      }
    }
  }
};

struct MatrixSource {
  std::string path;
  std::string format;
  std::size_t band = 0;  // 0 = full width
  std::size_t size = 0;  // 0 = infer (coo, hic)
  bool symmetrize = false;
  bool drop_outside = false;
};

chac::BandMatrix load_matrix(const MatrixSource& src, chac::Warnings& warnings) {
  auto in = open_in(src.path);
  auto bandwidth = [&](std::size_t p) {
    const std::size_t h = src.band == 0 ? p : src.band;
    if (h > p) {
      throw std::invalid_argument("--band " + std::to_string(h) + " exceeds p = " +
                                  std::to_string(p));
    }
    return h;
  };

  if (src.format == "dense") {
    const auto rows = chac::io::read_dense_csv(in);
    chac::DenseOptions opts;
    opts.symmetrize = src.symmetrize;
    return chac::from_dense(rows, bandwidth(rows.size()), opts);
  }
  if (src.format == "genotype") {
    const auto g = chac::io::read_genotype_csv(in);
    return chac::build_ld_r2(g, bandwidth(g.loci()));
  }
  auto coo = chac::io::read_coo(in);
  std::size_t p = src.size == 0 ? coo.max_index : src.size;
  if (p == 0) throw chac::input_error("cannot infer the number of objects from an empty file");
  if (src.format == "hic") {
    return chac::build_hic_log(chac::ContactMatrix(p, std::move(coo.triplets)), bandwidth(p));
  }
  chac::CooOptions opts;
  opts.drop_outside_band = src.drop_outside;
  return chac::from_coo(coo.triplets, p, bandwidth(p), opts, &warnings);
}

chac::Dendrogram load_merges(const std::string& path) {
  auto in = open_in(path);
  return chac::io::read_merges(in);
}

// --- cluster ------------------------------------------------------------------

struct ClusterArgs {
  MatrixSource src;
  double lambda = 0.0;
  std::string engine = "fast";
  std::string out;
  std::string manifest;
};

void add_cluster(CLI::App& app, ClusterArgs& a) {
  auto* cmd = app.add_subcommand("cluster", "Cluster a similarity matrix, write merges + manifest");
  cmd->add_option("-i,--input", a.src.path, "Input file");
  cmd->add_option("-f,--format", a.src.format, "Input format")
      ->check(CLI::IsMember({"coo", "dense", "genotype", "hic"}));
  cmd->add_option("-b,--band", a.src.band, "Bandwidth h (default: p)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("-p,--size", a.src.size, "Number of objects for coo/hic (default: max index)");
  cmd->add_flag("--symmetrize", a.src.symmetrize, "Average s_ij and s_ji of dense input");
  cmd->add_flag("--drop-outside-band", a.src.drop_outside, "Discard coo entries outside the band");
  cmd->add_option("-l,--lambda", a.lambda, "Diagonal shift added before clustering");
  cmd->add_option("-e,--engine", a.engine, "fast or naive")
      ->check(CLI::IsMember({"fast", "naive"}));
  cmd->add_option("-o,--out", a.out, "Output prefix")->required();
  cmd->add_option("-m,--manifest", a.manifest, "Re-run the settings of a manifest");
}

int run_cluster(CLI::App& app, ClusterArgs& a) {
  auto* cmd = app.get_subcommand("cluster");
  chac::io::Manifest loaded;
  if (!a.manifest.empty()) {
    auto in = open_in(a.manifest);
    loaded = chac::io::read_manifest(in);
  }
  const ManifestFill fill{cmd, a.manifest.empty() ? nullptr : &loaded};
  fill("--input", "input", a.src.path);
  fill("--format", "format", a.src.format);
  fill("--band", "h", a.src.band);
  fill("--size", "size", a.src.size);
  fill("--symmetrize", "symmetrize", a.src.symmetrize);
  fill("--drop-outside-band", "drop_outside_band", a.src.drop_outside);
  fill("--lambda", "lambda", a.lambda);
  fill("--engine", "engine", a.engine);
  if (a.src.path.empty() || a.src.format.empty()) {
    throw std::invalid_argument("cluster needs --input and --format (or --manifest)");
  }
  if (a.engine != "fast" && a.engine != "naive") throw std::invalid_argument("bad engine");

  chac::Warnings warnings;
  auto m = load_matrix(a.src, warnings);
  for (const auto& w : warnings.messages) std::cerr << "warning: " << w << '\n';
  if (a.lambda != 0.0) m = chac::shift_diagonal(m, a.lambda);

  const auto start = std::chrono::steady_clock::now();
  std::optional<chac::Dendrogram> d;
  std::size_t entries = 0;
  std::size_t heap_peak = 0;
  if (a.engine == "fast") {
    auto res = chac::cluster_with_stats(m);
    d = std::move(res.dendrogram);
    entries = res.stats.pencil_entries;
    heap_peak = res.stats.heap_peak;
  } else {
    d = chac::oracle::cluster_naive(chac::oracle::DenseSimilarity(m));
    entries = m.size() * m.size();
  }
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
  for (const auto& mg : d->merges()) {
    if (!std::isfinite(mg.height)) throw chac::numeric_error("non-finite linkage encountered");
  }

  {
    auto out = open_out(a.out + ".merges");
    chac::io::write_merges(out, *d);
  }
  {
    auto out = open_out(a.out + ".heights");
    chac::io::write_heights(out, *d);
  }
  chac::io::Manifest man{
      {"command", "cluster"},
      {"input", a.src.path},
      {"format", a.src.format},
      {"p", std::to_string(m.size())},
      {"h", std::to_string(m.bandwidth())},
      {"size", a.src.size == 0 ? "" : std::to_string(a.src.size)},
      {"symmetrize", a.src.symmetrize ? "true" : "false"},
      {"drop_outside_band", a.src.drop_outside ? "true" : "false"},
      {"engine", a.engine},
      {"lambda", chac::io::format_exact(a.lambda)},
      {"seed", "none"},
      {"wall_time_s", chac::io::format_height(wall.count())},
      {"pencil_entries", std::to_string(entries)},
      {"heap_peak", std::to_string(heap_peak)},
  };
  auto out = open_out(a.out + ".manifest");
  chac::io::write_manifest(out, man);
  std::cout << "clustered p=" << m.size() << " h=" << m.bandwidth() << " -> " << a.out
            << ".merges\n";
  return kOk;
}

// --- select -------------------------------------------------------------------

struct SelectArgs {
  std::string merges;
  std::string method = "broken-stick";
  std::size_t kmax = 0;
  double fit_fraction = 0.5;
  double multiplier = 2.0;
  std::string out;
  std::string manifest;
};

void add_select(CLI::App& app, SelectArgs& a) {
  auto* cmd = app.add_subcommand("select", "Choose the number of clusters and cut the tree");
  cmd->add_option("-t,--merges", a.merges, "Merge table");
  cmd->add_option("--method", a.method, "broken-stick or slope")
      ->check(CLI::IsMember({"broken-stick", "slope"}));
  cmd->add_option("-k,--kmax", a.kmax, "Largest K for the slope heuristic (default: p/2)");
  cmd->add_option("--fit-fraction", a.fit_fraction, "Share of [1, kmax] used to fit the slope");
  cmd->add_option("--multiplier", a.multiplier, "Penalty multiplier for the slope heuristic");
  cmd->add_option("-o,--out", a.out, "Labels file (default: stdout)");
  cmd->add_option("-m,--manifest", a.manifest, "Re-run the settings of a manifest");
}

int run_select(CLI::App& app, SelectArgs& a) {
  auto* cmd = app.get_subcommand("select");
  chac::io::Manifest loaded;
  if (!a.manifest.empty()) {
    auto in = open_in(a.manifest);
    loaded = chac::io::read_manifest(in);
  }
  const ManifestFill fill{cmd, a.manifest.empty() ? nullptr : &loaded};
  fill("--merges", "merges", a.merges);
  fill("--method", "method", a.method);
  fill("--kmax", "kmax", a.kmax);
  fill("--fit-fraction", "fit_fraction", a.fit_fraction);
  fill("--multiplier", "multiplier", a.multiplier);
  if (a.merges.empty()) throw std::invalid_argument("select needs --merges (or --manifest)");
  if (cmd->count("--kmax") > 0 && a.kmax < 2) throw std::invalid_argument("--kmax must be >= 2");

  const auto d = load_merges(a.merges);
  const std::size_t p = d.size();
  chac::Selection sel;
  std::size_t kmax = 0;
  if (p >= 2) {
    if (a.method == "broken-stick") {
      sel = chac::select_broken_stick(d);
      if (sel.clamped_heights > 0) {
        std::cerr << "warning: " << sel.clamped_heights << " negative heights treated as 0\n";
      }
    } else {
      kmax = a.kmax == 0 ? std::clamp<std::size_t>(p / 2, 2, p) : a.kmax;
      chac::SlopeOptions opts;
      opts.fit_fraction = a.fit_fraction;
      opts.multiplier = a.multiplier;
      sel = chac::select_slope_heuristic(d, kmax, opts);
    }
  }
  const auto part = chac::cut(d, sel.k);
  std::cout << "K=" << sel.k << '\n';
  if (a.out.empty()) {
    chac::io::write_labels(std::cout, part);
    return kOk;
  }
  {
    auto out = open_out(a.out);
    chac::io::write_labels(out, part);
  }
  chac::io::Manifest man{
      {"command", "select"},
      {"merges", a.merges},
      {"p", std::to_string(p)},
      {"method", a.method},
      {"kmax", kmax == 0 ? "" : std::to_string(kmax)},
      {"fit_fraction", chac::io::format_exact(a.fit_fraction)},
      {"multiplier", chac::io::format_exact(a.multiplier)},
      {"k", std::to_string(sel.k)},
      {"slope", chac::io::format_height(sel.slope)},
  };
  auto out = open_out(a.out + ".manifest");
  chac::io::write_manifest(out, man);
  return kOk;
}

// --- compare ------------------------------------------------------------------

struct CompareArgs {
  std::string a;
  std::string b;
  std::string labels_a;
  std::string labels_b;
  std::size_t cap = 2000;
  std::uint64_t seed = 20180401;
  bool raw_rand = false;
};

void add_compare(CLI::App& app, CompareArgs& a) {
  auto* cmd = app.add_subcommand("compare", "Compare two merge tables (and optionally labels)");
  cmd->add_option("a", a.a, "First merge table")->required();
  cmd->add_option("b", a.b, "Second merge table")->required();
  cmd->add_option("--labels-a", a.labels_a, "Labels file for the first partition");
  cmd->add_option("--labels-b", a.labels_b, "Labels file for the second partition");
  cmd->add_option("--gamma-cap", a.cap, "Largest p for exact Baker's gamma")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Seed for pair subsampling above the cap");
  cmd->add_flag("--raw-rand", a.raw_rand, "Also report the unadjusted Rand index");
}

int run_compare(CompareArgs& a) {
  const auto da = load_merges(a.a);
  const auto db = load_merges(a.b);
  chac::BakersGammaOptions opts;
  opts.exact_cap = a.cap;
  opts.seed = a.seed;
  const auto gamma = chac::bakers_gamma_detailed(da, db, opts);
  std::cout << "first_diff=" << format_real(chac::first_difference_index(da, db))
            << " bakers_gamma=" << format_real(gamma.gamma);
  if (gamma.subsampled) std::cout << " gamma_pairs=" << gamma.pairs << " seed=" << gamma.seed;
  if (!a.labels_a.empty() || !a.labels_b.empty()) {
    if (a.labels_a.empty() || a.labels_b.empty()) {
      throw std::invalid_argument("--labels-a and --labels-b go together");
    }
    auto ia = open_in(a.labels_a);
    auto ib = open_in(a.labels_b);
    const auto pa = chac::io::read_labels(ia);
    const auto pb = chac::io::read_labels(ib);
    std::cout << " adjusted_rand=" << format_real(chac::adjusted_rand(pa, pb));
    if (a.raw_rand) std::cout << " rand=" << format_real(chac::rand_index(pa, pb));
  }
  std::cout << '\n';
  return kOk;
}

// --- bench --------------------------------------------------------------------

struct BenchArgs {
  std::vector<std::size_t> p_list;
  std::vector<std::size_t> h_list;
  std::size_t reps = 3;
  std::uint64_t seed = 1;
  std::string engine = "fast";
  std::string out;
};

void add_bench(CLI::App& app, BenchArgs& a) {
  auto* cmd = app.add_subcommand("bench", "Time clustering of random band matrices");
  cmd->add_option("--p-list", a.p_list, "Comma-separated sizes")->delimiter(',')->required();
  cmd->add_option("--h-list", a.h_list, "Comma-separated bandwidths")->delimiter(',')->required();
  cmd->add_option("--reps", a.reps, "Repetitions per cell (median reported)");
  cmd->add_option("--seed", a.seed, "Generator seed");
  cmd->add_option("-e,--engine", a.engine, "fast, naive or both")
      ->check(CLI::IsMember({"fast", "naive", "both"}));
  cmd->add_option("-o,--out", a.out, "CSV output (default: stdout)");
}

int run_bench(BenchArgs& a) {
  if (a.p_list.empty() || a.h_list.empty()) throw std::invalid_argument("empty --p-list/--h-list");
  if (a.reps == 0) throw std::invalid_argument("--reps must be >= 1");
  for (auto v : a.p_list) {
    if (v == 0) throw std::invalid_argument("sizes must be positive");
  }
  for (auto v : a.h_list) {
    if (v == 0) throw std::invalid_argument("bandwidths must be positive");
  }

  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& out = a.out.empty() ? std::cout : file;
  out << "p,h,engine,reps,median_seconds,peak_entries,heap_peak\n";

  std::vector<std::string> engines;
  if (a.engine != "naive") engines.push_back("fast");
  if (a.engine != "fast") engines.push_back("naive");

  for (const auto p : a.p_list) {
    for (const auto h_req : a.h_list) {
      const std::size_t h = std::min(h_req, p);
      const auto m = chac::random_band_matrix(p, h, a.seed + p * 1000003ULL + h);
      for (const auto& engine : engines) {
        std::vector<double> times;
        std::size_t entries = 0;
        std::size_t heap_peak = 0;
        for (std::size_t r = 0; r <= a.reps; ++r) {  // r == 0 is an untimed warm-up
          const auto start = std::chrono::steady_clock::now();
          if (engine == "fast") {
            const auto res = chac::cluster_with_stats(m);
            entries = res.stats.pencil_entries;
            heap_peak = res.stats.heap_peak;
          } else {
            const auto d = chac::oracle::cluster_naive(chac::oracle::DenseSimilarity(m));
            entries = p * p;
          }
          const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
          if (r > 0) times.push_back(dt.count());
        }
        std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2),
                         times.end());
        out << p << ',' << h << ',' << engine << ',' << a.reps << ','
            << chac::io::format_height(times[times.size() / 2]) << ',' << entries << ','
            << heap_peak << '\n';
      }
    }
  }
  return kOk;
}

// --- plot ---------------------------------------------------------------------

struct PlotArgs {
  std::string merges;
  MatrixSource matrix;
  std::string format = "txt";
  std::string out;
};

void add_plot(CLI::App& app, PlotArgs& a) {
  auto* cmd = app.add_subcommand("plot", "Draw a dendrogram as text or SVG");
  cmd->add_option("-t,--merges", a.merges, "Merge table")->required();
  cmd->add_option("--matrix", a.matrix.path, "Similarity file for the heat strip");
  cmd->add_option("--matrix-format", a.matrix.format, "Format of --matrix")
      ->check(CLI::IsMember({"coo", "dense", "genotype", "hic"}));
  cmd->add_option("-b,--band", a.matrix.band, "Bandwidth of --matrix")->check(CLI::PositiveNumber);
  cmd->add_option("--format", a.format, "svg or txt")->check(CLI::IsMember({"svg", "txt"}));
  cmd->add_option("-o,--out", a.out, "Output file (default: stdout)");
}

int run_plot(PlotArgs& a) {
  const auto d = load_merges(a.merges);
  std::optional<chac::BandMatrix> m;
  if (!a.matrix.path.empty()) {
    if (a.matrix.format.empty()) throw std::invalid_argument("--matrix needs --matrix-format");
    if (a.matrix.size == 0 && (a.matrix.format == "coo" || a.matrix.format == "hic")) {
      a.matrix.size = d.size();
    }
    chac::Warnings warnings;
    m = load_matrix(a.matrix, warnings);
    if (m->size() != d.size()) throw chac::input_error("matrix size does not match the merge table");
  }
  const chac::BandMatrix* mp = m ? &*m : nullptr;
  const std::string doc =
      a.format == "svg" ? chac::plot::render_svg(d, mp) : chac::plot::render_text(d, mp);
  if (a.out.empty()) {
    std::cout << doc;
  } else {
    auto out = open_out(a.out);
    out << doc;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjacency-constrained Ward clustering of band similarity matrices"};
  app.require_subcommand(1);

  ClusterArgs cluster_args;
  SelectArgs select_args;
  CompareArgs compare_args;
  BenchArgs bench_args;
  PlotArgs plot_args;
  add_cluster(app, cluster_args);
  add_select(app, select_args);
  add_compare(app, compare_args);
  add_bench(app, bench_args);
  add_plot(app, plot_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArgs;
  }

  try {
    if (app.got_subcommand("cluster")) return run_cluster(app, cluster_args);
    if (app.got_subcommand("select")) return run_select(app, select_args);
    if (app.got_subcommand("compare")) return run_compare(compare_args);
    if (app.got_subcommand("bench")) return run_bench(bench_args);
    if (app.got_subcommand("plot")) return run_plot(plot_args);
  } catch (const chac::numeric_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  } catch (const chac::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kBadArgs;
  }
  return kBadArgs;
}
