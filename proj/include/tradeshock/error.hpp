#pragma once

#include <stdexcept>
#include <string>

namespace tradeshock {

// Error categories; the CLI maps them to exit codes 1/2/3.
enum class error_kind { validation = 1, data = 2, numeric = 3 };

class engine_error : public std::runtime_error {
public:
    engine_error(error_kind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    error_kind kind() const noexcept { return kind_; }

private:
    error_kind kind_;
};

// Bad user input: malformed files, out-of-range parameters, schema mismatches.
class validation_error : public engine_error {
public:
    explicit validation_error(const std::string& msg)
        : engine_error(error_kind::validation, msg) {}
};

// Structurally valid input that cannot be processed (empty panel, missing year, ...).
class data_error : public engine_error {
public:
    explicit data_error(const std::string& msg)
        : engine_error(error_kind::data, msg) {}
};

// Numerical failure: rank deficiency, degenerate systems.
class numeric_error : public engine_error {
public:
    explicit numeric_error(const std::string& msg)
        : engine_error(error_kind::numeric, msg) {}
};

inline const char* to_string(error_kind kind) {
    switch (kind) {
        case error_kind::validation: return "validation";
        case error_kind::data: return "data";
        case error_kind::numeric: return "numeric";
    }
    return "unknown";
}

}  // namespace tradeshock
