#pragma once

#include <stdexcept>
#include <string>

namespace qcut {

/// Invalid user-supplied parameter or configuration.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A resource guard tripped (qubit cap, enumeration budget, brute-force cap).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// File or stream failure, including malformed input files.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qcut
