#pragma once

// Matrix files and the JSON / CSV encodings of analysis results. Complex
// numbers and points are [re, im] pairs; doubles use the shortest
// representation that reads back to the same bits.

#include <string>
#include <string_view>
#include <vector>

#include "numrange/birth.hpp"
#include "numrange/extremal.hpp"
#include "numrange/kipp3.hpp"
#include "numrange/maxent.hpp"
#include "numrange/oracle.hpp"

namespace numrange {

/// {"d": n, "re": [[...]], "im": [[...]]}. Throws ParseError naming the line
/// or field at fault.
ComplexMatrix parse_matrix(std::string_view text);
/// Reads the file; a missing file is a ParseError as well.
ComplexMatrix load_matrix(const std::string& path);
std::string matrix_json(const ComplexMatrix& a);

/// "x,y" header and one vertex per line, 17 significant digits.
std::string polygon_csv(const ConvexPolygon& p);
std::string cloud_csv(const SampleCloud& c);

std::string basis_json(const OrthonormalBasis& q);
std::string extremes_json(const std::vector<ExtremePointReport>& e);
std::string flats_json(const std::vector<FlatPortion>& f);
std::string birth_json(const BirthFamily& family, const std::vector<BirthRow>& rows);
std::string classification_json(const KippenhahnClassification& c);
std::string canonical_json(const CanonicalForm3& c);

struct ClosureWitness {
  double eps = 0.0;
  std::string e3_error, f3_error;  ///< empty when the witness exists
  ComplexMatrix e3, f3;
  std::string e3_class, f3_class;
};
struct ClosureReport {
  bool in_closure_E3 = false, in_closure_F3 = false;
  std::vector<ClosureWitness> witnesses;
};
ClosureReport closure_report(const ComplexMatrix& a, const std::vector<double>& eps);
std::string closure_json(const ClosureReport& r);

std::string inference_json(const InferenceResult& r);
std::string probe_json(const ProbeReport& r);

}  // namespace numrange
