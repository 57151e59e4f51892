#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wpb {

// Base for every error this library throws on bad input or broken contracts.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed scalar strings, non-square tables, unknown labels, bad documents.
struct ParseError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

// Relaxation coefficient s < 1, or contraction constant k outside (0,1).
struct CoefficientError : Error {
    using Error::Error;
};

struct EmptyTrace : Error {
    EmptyTrace() : Error("trace is empty") {}
};

struct EmptySet : Error {
    EmptySet() : Error("subset is empty") {}
};

struct CarrierTooLarge : Error {
    explicit CarrierTooLarge(std::size_t n, std::size_t cap)
        : Error("carrier size " + std::to_string(n) + " exceeds subset-enumeration cap " +
                std::to_string(cap)) {}
};

struct EmptyImage : Error {
    std::size_t point;
    explicit EmptyImage(std::size_t x, const std::string& label)
        : Error("image of point '" + label + "' is empty"), point(x) {}
};

struct NotClosed : Error {
    std::size_t point;    // point whose image is not closed
    std::size_t witness;  // carrier point sitting in the closure but outside the image
    NotClosed(std::size_t x, const std::string& label, std::size_t w, const std::string& wlabel)
        : Error("image of point '" + label + "' is not closed: '" + wlabel +
                "' lies in its closure"),
          point(x),
          witness(w) {}
};

struct PreconditionFailed : Error {
    using Error::Error;
};

}  // namespace wpb
