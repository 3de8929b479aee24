#pragma once

// Command-line front end: count tables as TSV, optional lattice stream.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <variant>

#include "lattenum/enumerate.hpp"
#include "lattenum/lattice.hpp"

namespace lattenum::cli {

struct CliArgs {
  int max_n = 0;
  Mode mode = Mode::all;
  int threads = 1;
  std::string emit_path;
  std::string counts_path;
  int seed_size = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;

/// Header line plus one `n<TAB>count` line for n = 1..max_n.
inline std::string format_counts(const CountTable& table) {
  std::ostringstream out;
  out << "# mode=" << to_string(table.mode) << " max_n=" << table.max_n << '\n';
  for (int n = 1; n <= table.max_n; ++n) out << n << '\t' << table.at(n) << '\n';
  return out.str();
}

/// Parses the command line. Returns the arguments, or the exit code to stop
/// with (0 after --help, 2 on bad input).
inline std::variant<CliArgs, int> parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CliArgs args;
  const unsigned hw = std::thread::hardware_concurrency();
  args.threads = hw == 0 ? 1 : static_cast<int>(hw);
  std::string mode = "all";

  CLI::App app{"Counts unlabelled lattices up to a given size."};
  app.add_option("--max-n", args.max_n, "largest lattice size")->required()->check(CLI::Range(2, kMaxSize));
  app.add_option("--mode", mode, "all, vi, graded or vi-graded")
      ->check(CLI::IsMember({"all", "vi", "graded", "vi-graded"}));
  app.add_option("--threads", args.threads, "worker threads")->check(CLI::Range(1, 1024));
  app.add_option("--emit", args.emit_path, "write every lattice found to this file, one per line");
  app.add_option("--counts-out", args.counts_path, "write the count table here instead of stdout");
  app.add_option("--seed-size", args.seed_size, "lattice size up to which the tree is expanded before splitting")
      ->check(CLI::Range(2, kMaxSize));
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  args.mode = *parse_mode(mode);
  return args;
}

/// Runs an enumeration and writes its outputs. Progress and timing go to `err`.
inline int run(const CliArgs& args, std::ostream& out, std::ostream& err) {
  if (args.max_n < 2 || args.max_n > kMaxSize || args.threads < 1) {
    err << "error: arguments out of range\n";
    return kExitUsage;
  }
  EnumConfig config;
  config.max_n = args.max_n;
  config.mode = args.mode;
  config.threads = args.threads;
  config.seed_size = args.seed_size;

  std::ofstream emit;
  if (!args.emit_path.empty()) {
    emit.open(args.emit_path);
    if (!emit) {
      err << "error: cannot open " << args.emit_path << " for writing\n";
      return kExitIo;
    }
    config.sink = [&emit](const LevelledLattice& l) { emit << serialize(l) << '\n'; };
  }

  EnumStats stats;
  const CountTable table = enumerate(config, &stats);
  if (emit.is_open()) {
    emit.close();
    if (!emit) {
      err << "error: writing " << args.emit_path << " failed\n";
      return kExitIo;
    }
  }

  const std::string text = format_counts(table);
  if (args.counts_path.empty()) {
    out << text << std::flush;
    if (!out) return kExitIo;
  } else {
    std::ofstream file(args.counts_path);
    file << text;
    file.close();
    if (!file) {
      err << "error: cannot write " << args.counts_path << '\n';
      return kExitIo;
    }
  }

  const std::uint64_t found = table.total();
  err << "lattices=" << found << " wall_s=" << std::fixed << std::setprecision(3) << stats.wall_seconds
      << " cpu_s=" << stats.cpu_seconds << " threads=" << args.threads;
  if (const double c = stats.cycles_per_lattice(found); c > 0) {
    err << " cycles_per_lattice~" << std::setprecision(0) << c;
  }
  err << '\n';
  return kExitOk;
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  auto parsed = parse(argc, argv, out, err);
  if (const int* code = std::get_if<int>(&parsed)) return *code;
  try {
    return run(std::get<CliArgs>(parsed), out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace lattenum::cli
