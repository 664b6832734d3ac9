#pragma once

#include <stdexcept>
#include <string>

namespace fpnet {

// Base for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tensor/layer dimension problems (mismatched channels, empty outputs, ...).
class ShapeError : public Error {
public:
    explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Weight-file problems, one kind per failure mode so callers can tell them apart.
class WeightsError : public Error {
public:
    enum class Kind { BadMagic, BadVersion, BadHeader, ShapeMismatch, Truncated, Io };

    WeightsError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Image decoding problems.
class ImageError : public Error {
public:
    enum class Kind { BadMagic, BadMaxval, BadHeader, Truncated, Io };

    ImageError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Text-format problems (annotations, template files); carries the 1-based line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// Bad run configuration (unknown keys, out-of-range thresholds, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A synthetic scene whose faces cannot be represented at any pyramid level.
class SceneError : public Error {
public:
    explicit SceneError(const std::string& msg) : Error(msg) {}
};

} // namespace fpnet
