#ifndef LATPACK_CLI_HPP
#define LATPACK_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "latpack/io.hpp"

namespace latpack::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsage = 2,
  kDegenerate = 3,
  kRange = 4,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateBasis:
    case ErrorKind::CollinearVectors:
    case ErrorKind::ZeroVector:
    case ErrorKind::IterationLimit:
    case ErrorKind::BoundOverflow:
    case ErrorKind::NotWellRounded:
      return kDegenerate;
    case ErrorKind::InvalidTolerance:
      return kRange;
    case ErrorKind::InvalidStep:
      return kUsage;
  }
  return kUsage;
}

struct Options {
  std::string in_path;
  std::string out_path;
  double tol = kDefaultTolerance;
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  double step = 1e-3;
  std::string format = "json";
  int extent = 3;
  unsigned threads = 1;
};

namespace detail {

inline void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << io::Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

inline std::string read_input(const Options& opt, std::istream& in) {
  if (opt.in_path.empty()) return std::string(std::istreambuf_iterator<char>(in), {});
  std::ifstream file(opt.in_path, std::ios::binary);
  if (!file) throw io::ParseError("cannot open input file " + opt.in_path);
  return std::string(std::istreambuf_iterator<char>(file), {});
}

inline void write_output(const Options& opt, std::ostream& out, const std::string& text) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.out_path, std::ios::binary);
  if (!file) throw io::ParseError("cannot open output file " + opt.out_path);
  file << text;
}

inline Lattice read_lattice(const Options& opt, std::istream& in) {
  return make_lattice(io::basis_from_json(io::parse_document(read_input(opt, in))));
}

inline std::string run_command(const std::string& name, const Options& opt, std::istream& in) {
  if (name == "reduce") return io::emit_json(io::to_json(io::reduce_report(read_lattice(opt, in))));
  if (name == "density") return io::emit_json(io::to_json(io::density_report(read_lattice(opt, in), opt.tol)));
  if (name == "voronoi") {
    const Lattice lattice = read_lattice(opt, in);
    return opt.format == "svg" ? io::voronoi_svg(lattice) : io::emit_json(io::voronoi_document(lattice));
  }
  if (name == "render") {
    if (opt.extent < io::kMinExtent || opt.extent > io::kMaxExtent) throw std::out_of_range("extent must lie in [1, 20]");
    return io::packing_svg(read_lattice(opt, in), opt.extent);
  }
  if (name == "similar") {
    const io::Json doc = io::parse_document(read_input(opt, in));
    const Lattice a = make_lattice(io::basis_from_json(io::member(doc, "a")));
    const Lattice b = make_lattice(io::basis_from_json(io::member(doc, "b")));
    return io::emit_json(io::similarity_document(a, b, opt.tol));
  }
  if (name == "optimize") return io::emit_json(io::to_json(grid_search_density(opt.step, opt.threads)));
  throw std::logic_error("unknown command " + name);
}

}  // namespace detail

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Planar lattice packing toolkit"};
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::string> names{"reduce", "density", "voronoi", "render", "similar", "optimize", "verify"};
  std::vector<CLI::App*> subs;
  for (const auto& n : names) {
    CLI::App* sub = app.add_subcommand(n);
    sub->add_option("--in", opt.in_path, "Input JSON document (default stdin)");
    sub->add_option("--out", opt.out_path, "Output file (default stdout)");
    sub->add_option("--tol", opt.tol, "Relative tolerance");
    sub->add_option("--seed", opt.seed, "Base seed for random lattices");
    sub->add_option("--count", opt.count, "Number of random lattices (verify)")->check(CLI::Range(std::size_t{0}, std::size_t{100000}));
    sub->add_option("--step", opt.step, "Grid step (optimize, verify)");
    sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "svg"}));
    sub->add_option("--extent", opt.extent, "Translates per axis (render)");
    sub->add_option("--threads", opt.threads, "Worker threads for the grid search");
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    detail::report_error(err, "UsageError", e.what());
    return kUsage;
  }

  std::string name;
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i]->parsed()) name = names[i];
  }

  try {
    if (name == "verify") {
      const VerifySummary summary = run_verify(opt.seed, opt.count, opt.step);
      detail::write_output(opt, out, io::emit_json(io::to_json(summary)));
      return summary.passed() ? kOk : kVerificationFailed;
    }
    detail::write_output(opt, out, detail::run_command(name, opt, in));
    return kOk;
  } catch (const io::ParseError& e) {
    detail::report_error(err, "ParseError", e.what());
    return kUsage;
  } catch (const LatticeError& e) {
    detail::report_error(err, to_string(e.kind()), e.what());
    return exit_code_for(e.kind());
  } catch (const std::out_of_range& e) {
    detail::report_error(err, "RangeError", e.what());
    return kRange;
  }
}

}  // namespace latpack::cli

#endif  // LATPACK_CLI_HPP
