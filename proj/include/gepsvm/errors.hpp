#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gepsvm {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class NonFiniteInput : public Error {
public:
    using Error::Error;
};

class NonFiniteResult : public Error {
public:
    using Error::Error;
};

class DegenerateDenominator : public Error {
public:
    using Error::Error;
};

class DegenerateCenters : public Error {
public:
    using Error::Error;
};

class PointOnOtherCenter : public Error {
public:
    using Error::Error;
};

class EmptyClass : public Error {
public:
    using Error::Error;
};

class WeightLengthMismatch : public Error {
public:
    using Error::Error;
};

class InvalidSpace : public Error {
public:
    using Error::Error;
};

class ObjectiveFailure : public Error {
public:
    ObjectiveFailure(std::size_t organism, const std::string& what_arg)
        : Error("objective failed for organism " + std::to_string(organism) + ": " + what_arg),
          organism_index(organism) {}
    std::size_t organism_index;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line_no, std::size_t column_no, const std::string& what_arg)
        : Error("parse error at line " + std::to_string(line_no) + ", column " +
                std::to_string(column_no) + ": " + what_arg),
          line(line_no),
          column(column_no) {}
    std::size_t line;
    std::size_t column;
};

class MissingValue : public Error {
public:
    using Error::Error;
};

class NotBinary : public Error {
public:
    using Error::Error;
};

class TooFewSamples : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ModelFormatError : public Error {
public:
    using Error::Error;
};

}  // namespace gepsvm
