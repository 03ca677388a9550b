#ifndef COGS_XR_HPP
#define COGS_XR_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cogs/extraction.hpp"
#include "cogs/scene.hpp"

namespace cogs {

enum class ParamKind {
    Position,
    Object,
    ObjectList,
    Direction,
    RotationDelta,
    Size,
    Path,
    Color,
    ShapeType,
};

std::string to_string(ParamKind k);
std::optional<ParamKind> param_kind_from_string(const std::string& s);

struct ParamSpec {
    std::string name;
    ParamKind kind;
};

struct FunctionSignature {
    std::string name;
    std::string purpose;
    std::vector<ParamSpec> params;

    const ParamSpec* param(const std::string& name) const;
    /// "move(object, position)"
    std::string display() const;
};

struct FunctionCatalog {
    std::vector<FunctionSignature> functions;

    const FunctionSignature* find(const std::string& name) const;
    /// The eight built-in XR manipulation functions.
    static FunctionCatalog default_catalog();
};

/// "Sorry, the system is unable to do that, ..." with the catalog's
/// function names substituted. Part of the public contract.
std::string general_error_message(const FunctionCatalog& catalog);

/// A bound parameter value. ObjectSet covers both a resolved ObjectList and
/// an Object slot expanded from a select result.
struct ObjectSet {
    std::vector<std::string> names;
};

using Value = std::variant<std::monostate, std::string, double, Vec3, Quat, Path, ObjectSet>;

struct FunctionCall {
    std::string function;
    std::map<std::string, Value> params;
};

struct ExecResult {
    Scene scene;
    std::optional<std::vector<std::string>> selected;  // from select()
};

/// CSS basic color names -> RGB in [0,1]. Throws UnknownColor.
Rgb color_from_name(const std::string& name);

/// Applies one fully-bound call, returning the next scene state.
ExecResult execute_call(const Scene& scene, const FunctionCall& call,
                        const FunctionCatalog& catalog = FunctionCatalog::default_catalog());

/// Advances every path-attached object by dt at its constant speed,
/// reflecting at the path endpoints.
Scene step_paths(const Scene& scene, double dt_s);

}  // namespace cogs

#endif
