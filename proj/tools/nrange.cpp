// nrange: command-line front end of the numrange C library.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "numrange/numrange.h"

namespace {

struct UsageError {
  std::string message;
};

std::vector<double> parse_numbers(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || errno == ERANGE)
      throw UsageError{std::string(flag) + ": '" + text + "' is not a comma-separated list of numbers"};
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

struct Point {
  double x = 0.0, y = 0.0;
};

Point parse_point(const std::string& text) {
  const auto v = parse_numbers(text, "--point");
  if (v.size() != 2) throw UsageError{"--point expects x,y"};
  return {v[0], v[1]};
}

/// Owns the matrix handle and maps library status codes to exit codes.
class Session {
public:
  ~Session() {
    for (auto* m : mats_) nr_matrix_free(m);
  }

  nr_matrix* load(const std::string& path) {
    nr_matrix* m = nullptr;
    check(nr_matrix_load(path.c_str(), &m));
    mats_.push_back(m);
    return m;
  }

  void emit(nr_status s, char** text) {
    check(s);
    std::fputs(*text, stdout);
    nr_string_free(*text);
    *text = nullptr;
  }

  void check(nr_status s) {
    if (s != NR_OK) throw s;
  }

private:
  std::vector<nr_matrix*> mats_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical range analysis of complex square matrices"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for angle scans (output is unchanged)")->check(CLI::PositiveNumber);

  std::string file, file_b, point_text, eps_text = "0.1,0.01,0.001", closure_eps = "0.1";
  int samples = 1024, steps = 12;
  std::size_t n = 100000;
  std::uint64_t seed = 0;

  auto with_file = [&](CLI::App* sub) {
    sub->add_option("matrix", file, "matrix file {\"d\", \"re\", \"im\"}")->required();
    sub->fallthrough();
    return sub;
  };
  auto* boundary = with_file(app.add_subcommand("boundary", "boundary polygon of W(A) as CSV"));
  boundary->add_option("--samples", samples, "support angles")->check(CLI::PositiveNumber);
  auto* extremes = with_file(app.add_subcommand("extremes", "extreme points and their pre-images (JSON)"));
  auto* pre = with_file(app.add_subcommand("preimage", "pre-image basis of a boundary point (JSON)"));
  pre->add_option("--point", point_text, "x,y")->required();
  auto* flat = with_file(app.add_subcommand("flat", "flat boundary portions (JSON)"));
  auto* birth = with_file(app.add_subcommand("birth", "flat portion born at a multiply generated point (JSON)"));
  birth->add_option("--point", point_text, "x,y")->required();
  birth->add_option("--eps", eps_text, "descending positive values e1,e2,...");
  auto* classify = with_file(app.add_subcommand("classify3", "shape class of a 3x3 matrix (JSON)"));
  auto* canonical = with_file(app.add_subcommand("canonical3", "canonical form of a reducible 3x3 matrix (JSON)"));
  auto* closure = with_file(app.add_subcommand("closure3", "closure membership and witness matrices (JSON)"));
  closure->add_option("--eps", closure_eps, "witness parameters in (0, 1)");
  auto* haus = app.add_subcommand("hausdorff", "Hausdorff distance of two numerical ranges");
  haus->add_option("fileA", file, "first matrix file")->required();
  haus->add_option("fileB", file_b, "second matrix file")->required();
  haus->add_option("--samples", samples, "support angles")->check(CLI::PositiveNumber);
  haus->fallthrough();
  auto* maxent = with_file(app.add_subcommand("maxent", "maximum-entropy state with tr(A rho) = point (JSON)"));
  maxent->add_option("--point", point_text, "x,y")->required();
  auto* probe = with_file(app.add_subcommand("probe", "entropy discontinuity probe at a boundary point (JSON)"));
  probe->add_option("--point", point_text, "x,y")->required();
  probe->add_option("--steps", steps, "path samples")->check(CLI::Range(2, 1000));
  auto* oracle = with_file(app.add_subcommand("oracle", "seeded samples of x^*Ax as CSV"));
  oracle->add_option("--n", n, "sample count")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n\n%s", e.what(), app.help().c_str());
    return 1;
  }

  nr_set_threads(threads);
  Session s;
  try {
    char* out = nullptr;
    if (*boundary) {
      s.emit(nr_boundary_csv(s.load(file), samples, &out), &out);
    } else if (*extremes) {
      s.emit(nr_extremes_json(s.load(file), &out), &out);
    } else if (*pre) {
      const Point p = parse_point(point_text);
      s.emit(nr_preimage_json(s.load(file), p.x, p.y, &out), &out);
    } else if (*flat) {
      s.emit(nr_flat_json(s.load(file), &out), &out);
    } else if (*birth) {
      const Point p = parse_point(point_text);
      const auto eps = parse_numbers(eps_text, "--eps");
      s.emit(nr_birth_json(s.load(file), p.x, p.y, eps.data(), eps.size(), &out), &out);
    } else if (*classify) {
      s.emit(nr_classify3_json(s.load(file), &out), &out);
    } else if (*canonical) {
      s.emit(nr_canonical3_json(s.load(file), &out), &out);
    } else if (*closure) {
      const auto eps = parse_numbers(closure_eps, "--eps");
      s.emit(nr_closure3_json(s.load(file), eps.data(), eps.size(), &out), &out);
    } else if (*haus) {
      nr_matrix* a = s.load(file);
      nr_matrix* b = s.load(file_b);
      double d = 0.0;
      s.check(nr_hausdorff(a, b, samples, &d));
      std::printf("%.17g\n", d);
    } else if (*maxent) {
      const Point p = parse_point(point_text);
      s.emit(nr_maxent_json(s.load(file), p.x, p.y, &out), &out);
    } else if (*probe) {
      const Point p = parse_point(point_text);
      s.emit(nr_probe_json(s.load(file), p.x, p.y, steps, &out), &out);
    } else if (*oracle) {
      s.emit(nr_oracle_csv(s.load(file), n, seed, &out), &out);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "%s\n\n%s", e.message.c_str(), app.help().c_str());
    return 1;
  } catch (nr_status status) {
    std::fprintf(stderr, "%s\n", nr_last_error());
    return static_cast<int>(status);
  }
  return std::fflush(stdout) == 0 ? 0 : 4;
}
