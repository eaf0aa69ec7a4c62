// Copyright 2026 The ipikit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace ipi {

/// Caller violated an operation's precondition (e.g. spans from different documents).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Input data breaks a model invariant: bad offsets, unknown labels, malformed records.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SectioningError : public DataError {
public:
    using DataError::DataError;
};

} // namespace ipi
