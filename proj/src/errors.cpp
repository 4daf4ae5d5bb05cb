#include "l1quad/errors.hpp"

namespace l1quad {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DegenerateForce: return "DegenerateForce";
    case ErrorCode::PoleCollision: return "PoleCollision";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::UnboundedSample: return "UnboundedSample";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace l1quad
