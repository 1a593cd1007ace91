#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace budlaw {

enum class ErrorKind {
    DescriptorMismatch,
    DivisionUndefined,
    CharacteristicMismatch,
    NotPrime,
    ShapeMismatch,
    NonzeroConstantTerm,
    NonUnitLinearTerm,
    NotPIntegral,
    EmbeddingUndefined,
    IdentityFail,
    AssocFail,
    CommFail,
    NotAHomomorphism,
    TruncationTooShallow,
    LawMismatch,
    NotMultipleOfC,
    NoExtension,
    ShapeViolation,
    Obstructed,
    OrderTooSmall,
    HeightMismatch,
    NotQAlgebra,
    InvalidInput,
};

std::string_view to_string(ErrorKind kind);

// Every module reports failures through this one exception type. The kind is
// stable (it is what the CLI prints); witness/degree carry the offending
// monomial or degree where the operation has one.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail,
          std::vector<unsigned> witness = {},
          std::optional<unsigned> degree = std::nullopt)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail),
          kind_(kind), detail_(detail), witness_(std::move(witness)),
          degree_(degree)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& detail() const noexcept { return detail_; }
    const std::vector<unsigned>& witness() const noexcept { return witness_; }
    std::optional<unsigned> degree() const noexcept { return degree_; }

private:
    ErrorKind kind_;
    std::string detail_;
    std::vector<unsigned> witness_;
    std::optional<unsigned> degree_;
};

} // namespace budlaw
