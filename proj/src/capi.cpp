#include "numrange/numrange.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "numrange/errors.hpp"
#include "numrange/parallel.hpp"
#include "numrange/serialize.hpp"

struct nr_matrix {
  numrange::ComplexMatrix m;
};

namespace {

thread_local std::string last_error;

nr_status fail(nr_status s, const char* what) {
  last_error = what;
  return s;
}

template <class F>
nr_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return NR_OK;
  } catch (const numrange::PreconditionError& e) {
    return fail(NR_ERR_PRECONDITION, e.what());
  } catch (const numrange::ParseError& e) {
    return fail(NR_ERR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(NR_ERR_USAGE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NR_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NR_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NR_ERR_INTERNAL, "unknown error");
  }
}

char* copy_out(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* name) {
  if (!p) throw std::invalid_argument(std::string(name) + " must not be null");
}

/// Runs make() and stores its string result in *out.
template <class F>
nr_status string_result(const nr_matrix* a, char** out, F&& make) {
  return guarded([&] {
    need(a, "matrix");
    need(out, "out");
    *out = copy_out(make(a->m));
  });
}

nr_status new_matrix(numrange::ComplexMatrix m, nr_matrix** out) {
  *out = new nr_matrix{std::move(m)};
  return NR_OK;
}

}  // namespace

extern "C" {

const char* nr_last_error(void) { return last_error.c_str(); }

void nr_string_free(char* s) { std::free(s); }

void nr_set_threads(int n) { numrange::set_thread_count(n); }

nr_status nr_matrix_create(size_t d, const double* re, const double* im, nr_matrix** out) {
  return guarded([&] {
    need(out, "out");
    need(re, "re");
    need(im, "im");
    if (d == 0) throw std::invalid_argument("dimension must be positive");
    numrange::ComplexMatrix m(d);
    for (size_t i = 0; i < d; ++i)
      for (size_t j = 0; j < d; ++j) m(i, j) = {re[i * d + j], im[i * d + j]};
    new_matrix(std::move(m), out);
  });
}

nr_status nr_matrix_load(const char* path, nr_matrix** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    new_matrix(numrange::load_matrix(path), out);
  });
}

nr_status nr_matrix_parse_json(const char* text, nr_matrix** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    new_matrix(numrange::parse_matrix(text), out);
  });
}

nr_status nr_matrix_to_json(const nr_matrix* a, char** out) {
  return string_result(a, out, [](const auto& m) { return numrange::matrix_json(m); });
}

void nr_matrix_free(nr_matrix* a) { delete a; }

size_t nr_matrix_dim(const nr_matrix* a) { return a ? a->m.dim() : 0; }

nr_status nr_matrix_entry(const nr_matrix* a, size_t i, size_t j, double* re, double* im) {
  return guarded([&] {
    need(a, "matrix");
    if (i >= a->m.dim() || j >= a->m.dim()) throw std::invalid_argument("entry index out of range");
    if (re) *re = a->m(i, j).real();
    if (im) *im = a->m(i, j).imag();
  });
}

nr_status nr_support_value(const nr_matrix* a, double theta, double* out) {
  return guarded([&] {
    need(a, "matrix");
    need(out, "out");
    *out = numrange::support_value(a->m, theta).support;
  });
}

nr_status nr_contains(const nr_matrix* a, double x, double y, int* out) {
  return guarded([&] {
    need(a, "matrix");
    need(out, "out");
    *out = numrange::contains(a->m, {x, y}) ? 1 : 0;
  });
}

nr_status nr_hausdorff(const nr_matrix* a, const nr_matrix* b, int samples, double* out) {
  return guarded([&] {
    need(a, "matrix");
    need(b, "matrix");
    need(out, "out");
    *out = numrange::hausdorff(numrange::boundary_polygon(a->m, samples), numrange::boundary_polygon(b->m, samples));
  });
}

nr_status nr_boundary_csv(const nr_matrix* a, int samples, char** out) {
  return string_result(a, out, [&](const auto& m) { return numrange::polygon_csv(numrange::boundary_polygon(m, samples)); });
}

nr_status nr_oracle_csv(const nr_matrix* a, size_t n, uint64_t seed, char** out) {
  return string_result(a, out, [&](const auto& m) { return numrange::cloud_csv(numrange::sample_range(m, n, seed)); });
}

nr_status nr_extremes_json(const nr_matrix* a, char** out) {
  return string_result(a, out, [](const auto& m) { return numrange::extremes_json(numrange::extreme_points(m)); });
}

nr_status nr_preimage_json(const nr_matrix* a, double x, double y, char** out) {
  return string_result(a, out, [&](const auto& m) { return numrange::basis_json(numrange::preimage(m, {x, y})); });
}

nr_status nr_flat_json(const nr_matrix* a, char** out) {
  return string_result(a, out, [](const auto& m) { return numrange::flats_json(numrange::flat_portions(m)); });
}

nr_status nr_birth_json(const nr_matrix* a, double x, double y, const double* eps, size_t n_eps, char** out) {
  return string_result(a, out, [&](const auto& m) {
    if (n_eps > 0) need(eps, "eps");
    const auto fam = numrange::birth_family(m, {x, y});
    const std::vector<double> e(eps, eps + n_eps);
    return numrange::birth_json(fam, numrange::verify_birth(fam, e));
  });
}

nr_status nr_classify3_json(const nr_matrix* a, char** out) {
  return string_result(a, out, [](const auto& m) { return numrange::classification_json(numrange::classify(m)); });
}

nr_status nr_canonical3_json(const nr_matrix* a, char** out) {
  return string_result(a, out,
                       [](const auto& m) { return numrange::canonical_json(numrange::canonical_reducible_form(m)); });
}

nr_status nr_closure3_json(const nr_matrix* a, const double* eps, size_t n_eps, char** out) {
  return string_result(a, out, [&](const auto& m) {
    if (n_eps > 0) need(eps, "eps");
    return numrange::closure_json(numrange::closure_report(m, std::vector<double>(eps, eps + n_eps)));
  });
}

nr_status nr_maxent_json(const nr_matrix* a, double x, double y, char** out) {
  return string_result(a, out, [&](const auto& m) { return numrange::inference_json(numrange::maxent(m, {x, y})); });
}

nr_status nr_probe_json(const nr_matrix* a, double x, double y, int steps, char** out) {
  return string_result(a, out,
                       [&](const auto& m) { return numrange::probe_json(numrange::discontinuity_probe(m, {x, y}, steps)); });
}

}  // extern "C"
