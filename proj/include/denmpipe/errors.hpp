#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace denmpipe {

/// Machine-checkable failure categories used across the library. Every
/// thrown denmpipe::Error carries one of these plus a human-readable
/// message; some also carry a field path or a numeric detail (byte
/// position, HTTP status, ...).
enum class Errc {
    // lane-status / text parsing
    empty_input,
    too_long,
    non_binary_character,
    // bit-level codec
    out_of_range,
    truncated,
    decoded_out_of_range,
    nonzero_padding,
    length_out_of_range,
    bad_hex_character,
    odd_length,
    invalid_message,
    // message construction
    incomplete_params,
    precondition,
    // providers / agents
    missing_fixture,
    no_json_found,
    missing_keys,
    unparseable_output,
    schema_mismatch,
    consistency_error,
    field_out_of_range,
    provider_error,
    timeout,
    http_status,
    auth_missing,
    bad_format,
    dimension_mismatch,
    empty_depth,
    // telemetry / eval / io
    io_error,
    invariant,
    bad_header,
    duplicate_image_id,
    row_invariant,
    missing_prediction,
    empty_log,
    bad_config,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::empty_input: return "EmptyInput";
        case Errc::too_long: return "TooLong";
        case Errc::non_binary_character: return "NonBinaryCharacter";
        case Errc::out_of_range: return "OutOfRange";
        case Errc::truncated: return "Truncated";
        case Errc::decoded_out_of_range: return "DecodedOutOfRange";
        case Errc::nonzero_padding: return "NonZeroPadding";
        case Errc::length_out_of_range: return "LengthOutOfRange";
        case Errc::bad_hex_character: return "BadHexCharacter";
        case Errc::odd_length: return "OddLength";
        case Errc::invalid_message: return "InvalidMessage";
        case Errc::incomplete_params: return "IncompleteParams";
        case Errc::precondition: return "Precondition";
        case Errc::missing_fixture: return "MissingFixture";
        case Errc::no_json_found: return "NoJsonFound";
        case Errc::missing_keys: return "MissingKeys";
        case Errc::unparseable_output: return "UnparseableOutput";
        case Errc::schema_mismatch: return "SchemaMismatch";
        case Errc::consistency_error: return "ConsistencyError";
        case Errc::field_out_of_range: return "FieldOutOfRange";
        case Errc::provider_error: return "ProviderError";
        case Errc::timeout: return "Timeout";
        case Errc::http_status: return "HttpStatus";
        case Errc::auth_missing: return "AuthMissing";
        case Errc::bad_format: return "BadFormat";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::empty_depth: return "EmptyDepth";
        case Errc::io_error: return "IoError";
        case Errc::invariant: return "Invariant";
        case Errc::bad_header: return "BadHeader";
        case Errc::duplicate_image_id: return "DuplicateImageId";
        case Errc::row_invariant: return "RowInvariant";
        case Errc::missing_prediction: return "MissingPrediction";
        case Errc::empty_log: return "EmptyLog";
        case Errc::bad_config: return "BadConfig";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string message, std::string field = {},
          std::int64_t detail = -1)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message),
          code_(code),
          message_(std::move(message)),
          field_(std::move(field)),
          detail_(detail) {}

    Errc code() const noexcept { return code_; }

    /// The message without the category prefix that what() carries.
    const std::string& message() const noexcept { return message_; }

    /// Field path ("management.reference_time_its_ms"), offending key,
    /// or environment-variable name, depending on the error.
    const std::string& field() const noexcept { return field_; }

    /// Numeric context: character/bit position, HTTP status code, etc.
    /// -1 when not applicable.
    std::int64_t detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::string message_;
    std::string field_;
    std::int64_t detail_;
};

}  // namespace denmpipe
