// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpc {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

// --- glyph atlas ---

class UnsupportedChar : public Error {
public:
    UnsupportedChar(char c, std::size_t position)
        : Error("unsupported character '" + std::string(1, c) + "' at position " +
                std::to_string(position)),
          ch(c), position(position) {}
    char ch;
    std::size_t position;
};

class InsufficientCapacity : public Error {
public:
    InsufficientCapacity(char c, std::size_t count, std::size_t required)
        : Error("glyph '" + std::string(1, c) + "' has only " + std::to_string(count) +
                " eligible pixels, " + std::to_string(required) + " required"),
          ch(c), count(count), required(required) {}
    char ch;
    std::size_t count;
    std::size_t required;
};

class AtlasCorrupt : public Error {
public:
    using Error::Error;
};

// --- perturbation channel ---

class CapacityExceeded : public Error {
public:
    CapacityExceeded(std::size_t glyph_index, long long value, std::size_t capacity)
        : Error("glyph " + std::to_string(glyph_index) + ": payload value " +
                std::to_string(value) + " exceeds capacity " + std::to_string(capacity)),
          glyph_index(glyph_index), value(value), capacity(capacity) {}
    std::size_t glyph_index;
    long long value;
    std::size_t capacity;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// --- payload codecs ---

class UnsupportedSecretChar : public Error {
public:
    UnsupportedSecretChar(char c, std::size_t position)
        : Error("secret character '" + std::string(1, c) + "' at position " +
                std::to_string(position) + " is outside A-Z"),
          ch(c), position(position) {}
    char ch;
    std::size_t position;
};

class ValueOutOfRange : public Error {
public:
    ValueOutOfRange(std::size_t index, long long value)
        : Error("payload value " + std::to_string(value) + " at index " +
                std::to_string(index) + " is out of range"),
          index(index), value(value) {}
    std::size_t index;
    long long value;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class TooShort : public Error {
public:
    using Error::Error;
};

class FrameCountMismatch : public Error {
public:
    using Error::Error;
};

class EmptyVideo : public Error {
public:
    using Error::Error;
};

// --- container ---

class MixedTileSizes : public Error {
public:
    using Error::Error;
};

class AtlasMismatch : public Error {
public:
    using Error::Error;
};

class GeometryMismatch : public Error {
public:
    using Error::Error;
};

class ManifestParse : public Error {
public:
    using Error::Error;
};

class VersionUnsupported : public Error {
public:
    using Error::Error;
};

class CoverTooShort : public Error {
public:
    CoverTooShort(std::size_t needed, std::size_t available)
        : Error("payload needs " + std::to_string(needed) + " carrier glyphs, cover has " +
                std::to_string(available)),
          needed(needed), available(available) {}
    std::size_t needed;
    std::size_t available;
};

// --- media io ---

class MissingFrame : public Error {
public:
    explicit MissingFrame(std::size_t index)
        : Error("missing frame file at index " + std::to_string(index)), index(index) {}
    std::size_t index;
};

class MixedDimensions : public Error {
public:
    using Error::Error;
};

// --- metrics ---

class EmptyReference : public Error {
public:
    using Error::Error;
};

class LengthMismatch : public Error {
public:
    using Error::Error;
};

class ZeroReferenceSignal : public Error {
public:
    using Error::Error;
};

}  // namespace gpc
