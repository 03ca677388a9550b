#ifndef COGS_PIPELINE_HPP
#define COGS_PIPELINE_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cogs/extraction.hpp"
#include "cogs/intent.hpp"
#include "cogs/xr.hpp"

namespace cogs {

struct PipelineConfig {
    int64_t padding_ms = 300;  // widens each parameter-token window
    ExtractionConfig extraction;
    FunctionCatalog catalog = FunctionCatalog::default_catalog();
};

struct ParamReport {
    std::string name;
    ParamKind kind = ParamKind::Object;
    bool from_text = false;
    bool resolved = false;
    std::string value_text;  // human-readable value summary
    std::optional<TimeInterval> window;
    std::string error;  // why extraction failed, when it did
};

struct CallReport {
    std::string function;
    std::vector<ParamReport> params;
    std::optional<std::vector<std::string>> selected;  // select() result
};

struct ExecutedResult {
    Scene scene;
    std::vector<CallReport> calls;
};

struct ClarificationRequest {
    std::string function;
    std::string signature_display;
    std::vector<std::string> missing;  // parameter names, signature order
    std::vector<std::pair<std::string, std::string>> resolved;  // name -> summary
    std::string message;
    std::vector<CallReport> calls;
};

using Resolution = std::variant<ExecutedResult, ClarificationRequest>;

/// Runs a plan end to end: per ambiguous parameter, cut the gesture trace
/// at the padded token window and extract a value by kind; execute all
/// calls in order only when every parameter of every call resolved,
/// otherwise return a ClarificationRequest for the first incomplete call
/// with the scene untouched. A pronoun object slot ("them") after a select
/// call binds to that call's result set.
Resolution resolve(const Plan& plan, const Transcript& t, const GestureTrace& trace,
                   const Scene& scene, const PipelineConfig& config = {});

/// "Unable to retrieve '<p>' parameter for function <f>(<params>).
///  The '<q>' parameter was detected as <value>. Could you repeat your
///  command?" One detected clause per resolved parameter; none when
/// nothing resolved. Golden-tested verbatim.
std::string clarification_message(
    const FunctionSignature& sig,
    const std::vector<std::pair<std::string, std::string>>& resolved,
    const std::vector<std::string>& missing);

// Evaluation metrics.
double metric_position_error(const Vec3& p, const Vec3& target);  // meters
double metric_rotation_diff(const Quat& a, const Quat& b);        // degrees, geodesic
/// 100 * |length - target| / target; nullopt when target = 0.
std::optional<double> metric_size_pct(double length, double target);

struct PrecisionRecall {
    std::optional<double> precision;  // nullopt when nothing was selected
    std::optional<double> recall;     // nullopt when truth is empty
};
PrecisionRecall metric_selection(const std::vector<std::string>& selected,
                                 const std::vector<std::string>& truth);

/// dtw_similarity of the polylines (percent).
double metric_path(const std::vector<Vec3>& extracted, const std::vector<Vec3>& target);

}  // namespace cogs

#endif
