// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ltprune {

/// Error raised for any file problem: missing file, malformed header,
/// payload size mismatch, non-finite values, broken mask files. Messages
/// name the offending path and the byte or line position where known.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What a matrix holds. Stored as a single byte in the LTP1 header;
/// purely informational, no operation dispatches on it.
enum class Role : std::uint8_t {
    visual = 0,
    text = 1,
    cls = 2,
    projection = 3,
};

std::string_view to_string(Role role);
Role parse_role(std::string_view name);

/// Dense row-major matrix of 32-bit floats, the unit of exchange between
/// the pruning stages and whatever exported the embeddings.
///
/// Invariants (checked by validate()): rows >= 1, cols >= 1,
/// data.size() == rows * cols, every value finite.
struct EmbeddingMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    Role role = Role::visual;
    std::vector<float> data;

    float at(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }
    std::span<const float> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }

    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;

    bool operator==(const EmbeddingMatrix&) const = default;
};

/// Which original token positions survive a pruning stage.
///
/// Invariants (checked by validate()): kept nonempty, strictly increasing,
/// every index < total.
struct IndexMask {
    std::size_t total = 0;
    std::vector<std::size_t> kept;

    /// Mask retaining every index in [0, total).
    static IndexMask identity(std::size_t total);

    bool contains(std::size_t index) const;

    /// Throws std::invalid_argument on any broken invariant.
    void validate() const;

    bool operator==(const IndexMask&) const = default;
};

/// Loads a matrix from an LTP1 file (recognized by magic) or, failing the
/// magic check, parses the file as CSV: UTF-8, comma-separated floats, one
/// row per line, LF or CRLF, no header. CSV carries no role byte, so
/// `csv_role` supplies it.
EmbeddingMatrix load_matrix(const std::filesystem::path& path, Role csv_role = Role::visual);

/// Writes the LTP1 binary format: magic "LTPRUNE1", u32 LE rows, u32 LE
/// cols, u8 role, then rows*cols little-endian IEEE-754 binary32 values.
/// Round trip through load_matrix is bit-exact.
void save_matrix(const EmbeddingMatrix& m, const std::filesystem::path& path);

/// Mask text format: first line "total=N", then one kept index per line.
IndexMask load_mask(const std::filesystem::path& path);
void save_mask(const IndexMask& mask, const std::filesystem::path& path);

/// CSV parser behind load_matrix, exposed for in-memory fixtures.
/// `origin` names the source in error messages.
EmbeddingMatrix parse_csv_matrix(std::string_view text, Role role, std::string_view origin = "<csv>");

}  // namespace ltprune
