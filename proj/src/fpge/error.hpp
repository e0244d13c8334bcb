// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The fpge Authors

#pragma once

#include <stdexcept>
#include <string>

namespace fpge {

// Recoverable failures caused by user input. Contract violations (bad
// arguments from calling code) are reported with std::invalid_argument.
enum class ErrorKind { usage, grammar, data, io };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
    {
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace fpge
