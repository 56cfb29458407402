#pragma once

#include <stdexcept>
#include <string>

namespace srdf {

/* Invalid configuration or input validation failure. The CLI maps this
 * to exit code 2, everything else to 3. */
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/* Runtime failure inside a pipeline stage (non-finite energy, degenerate
 * viewpoint, ...). Messages are prefixed with the failing module. */
class PipelineError : public std::runtime_error {
public:
    explicit PipelineError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace srdf
