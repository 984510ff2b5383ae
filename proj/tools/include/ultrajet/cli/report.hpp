#ifndef ULTRAJET_CLI_REPORT_HPP
#define ULTRAJET_CLI_REPORT_HPP

#include "ultrajet/classnorms.hpp"
#include "ultrajet/diffgroup.hpp"
#include "ultrajet/explaw.hpp"
#include "ultrajet/jet.hpp"
#include "ultrajet/rational.hpp"
#include "ultrajet/weightseq.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace ultrajet::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "ultrajet-report/1";
inline constexpr const char* kToolVersion = "0.1.0";

/// Serializes with every double printed as %.17g; non-finite doubles become the
/// strings "inf", "-inf" and "nan".
std::string dump(const json& j, int indent = 2);

json rational_json(const Rational& q);
template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json to_json(const PropertyVerdict& v);
json to_json(const PartialSumsReport& r);
json to_json(const SeminormReport& r);
json to_json(const TypeRadiusReport& r);
json to_json(const ExplawReport& r);
json to_json(const CounterexampleRun& r);
json to_json(const KitSweep& s);
json to_json(const ClassTag& t);
json to_json(const BoundCertificate& c);
json to_json(const ComposedCertificate& c);
json to_json(const InverseBoundTable& t);
json to_json(const MatrixInverseBound& b);

/// Coefficients as [{"component", "index", "value"}]; Rational values carry the exact string.
json jet_json(const Jet<double>& j);
json jet_json(const Jet<Rational>& j);

}  // namespace ultrajet::cli

#endif
