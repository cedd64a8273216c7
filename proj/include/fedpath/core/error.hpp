// Copyright (c) 2026, the fedpath authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace fedpath {

// Base class for all fedpath errors. Subclasses map to stable CLI exit
// codes: ConfigError -> 1, IoError -> 2, training failures -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Shape mismatch between tensors or parameter vectors.
class DimensionError : public Error {
public:
    using Error::Error;
};

// NaN/Inf encountered where finite values are required.
class NumericError : public Error {
public:
    using Error::Error;
};

// Stain profile estimation failed (too few tissue pixels, rank deficiency).
class EstimationError : public Error {
public:
    using Error::Error;
};

// A whole federation round failed (no client produced a usable update).
class AggregationError : public Error {
public:
    using Error::Error;
};

// One client's local training failed; the round drops it and renormalizes.
class ClientFailure : public Error {
public:
    ClientFailure(int client_id, int round, const std::string& cause)
        : Error("client " + std::to_string(client_id) + " failed in round " +
                std::to_string(round) + ": " + cause),
          client_id(client_id),
          round(round),
          cause(cause) {}

    int client_id;
    int round;
    std::string cause;
};

}  // namespace fedpath
