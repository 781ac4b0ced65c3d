#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grapevine {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Graph store errors. A transaction is rejected as a whole on the first of these.
struct UnknownIdError : Error {
    explicit UnknownIdError(std::uint64_t id)
        : Error("unknown id " + std::to_string(id)), id(id) {}
    std::uint64_t id;
};

struct DuplicateIdError : Error {
    explicit DuplicateIdError(std::uint64_t id)
        : Error("duplicate id " + std::to_string(id)), id(id) {}
    std::uint64_t id;
};

struct DanglingVertexRemovalError : Error {
    explicit DanglingVertexRemovalError(std::uint64_t id)
        : Error("vertex " + std::to_string(id) + " still has incident edges"), id(id) {}
    std::uint64_t id;
};

// Query frontend diagnostics; line/column are 1-based.
struct SyntaxError : Error {
    SyntaxError(std::size_t line, std::size_t column, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line(line), column(column), message(message) {}
    std::size_t line;
    std::size_t column;
    std::string message;
};

struct UnsupportedFeatureError : Error {
    explicit UnsupportedFeatureError(const std::string& construct)
        : Error("unsupported construct: " + construct), construct(construct) {}
    std::string construct;
};

// Algebra errors.
struct UnknownAttributeError : Error {
    explicit UnknownAttributeError(const std::string& attribute, const std::string& node = "")
        : Error("unknown attribute '" + attribute + "'" + (node.empty() ? "" : " in " + node)),
          attribute(attribute), node(node) {}
    std::string attribute;
    std::string node;
};

struct AmbiguousBindingError : Error {
    explicit AmbiguousBindingError(const std::string& variable)
        : Error("variable '" + variable + "' is not bound by exactly one base operator"),
          variable(variable) {}
    std::string variable;
};

// Internal consistency violation in the operator network; never expected on valid input.
struct NegativeMultiplicityError : Error {
    using Error::Error;
};

// Malformed external input (graph files, update files).
struct InputError : Error {
    using Error::Error;
};

}  // namespace grapevine
