#pragma once

#include <stdexcept>
#include <string>

namespace cycloid {

// Parameter/precondition violations use std::domain_error directly.

struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace cycloid
