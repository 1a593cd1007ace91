#include "budlaw/errors.hpp"

namespace budlaw {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorKind::DivisionUndefined: return "DivisionUndefined";
    case ErrorKind::CharacteristicMismatch: return "CharacteristicMismatch";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorKind::NonUnitLinearTerm: return "NonUnitLinearTerm";
    case ErrorKind::NotPIntegral: return "NotPIntegral";
    case ErrorKind::EmbeddingUndefined: return "EmbeddingUndefined";
    case ErrorKind::IdentityFail: return "IdentityFail";
    case ErrorKind::AssocFail: return "AssocFail";
    case ErrorKind::CommFail: return "CommFail";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::TruncationTooShallow: return "TruncationTooShallow";
    case ErrorKind::LawMismatch: return "LawMismatch";
    case ErrorKind::NotMultipleOfC: return "NotMultipleOfC";
    case ErrorKind::NoExtension: return "NoExtension";
    case ErrorKind::ShapeViolation: return "ShapeViolation";
    case ErrorKind::Obstructed: return "Obstructed";
    case ErrorKind::OrderTooSmall: return "OrderTooSmall";
    case ErrorKind::HeightMismatch: return "HeightMismatch";
    case ErrorKind::NotQAlgebra: return "NotQAlgebra";
    case ErrorKind::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

} // namespace budlaw
