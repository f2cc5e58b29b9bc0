// SPDX-License-Identifier: Apache-2.0

#include "ltprune/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace ltprune {

namespace {

constexpr char kMagic[8] = {'L', 'T', 'P', 'R', 'U', 'N', 'E', '1'};
constexpr std::size_t kHeaderSize = 8 + 4 + 4 + 1;  // magic + rows + cols + role

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void write_u32_le(std::uint32_t v, unsigned char* p) {
    p[0] = static_cast<unsigned char>(v);
    p[1] = static_cast<unsigned char>(v >> 8);
    p[2] = static_cast<unsigned char>(v >> 16);
    p[3] = static_cast<unsigned char>(v >> 24);
}

float read_f32_le(const unsigned char* p) {
    std::uint32_t bits = read_u32_le(p);
    return std::bit_cast<float>(bits);
}

void write_f32_le(float v, unsigned char* p) {
    write_u32_le(std::bit_cast<std::uint32_t>(v), p);
}

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw io_error(path.string() + ": " + what);
}

EmbeddingMatrix load_ltp1(const std::filesystem::path& path, const std::string& bytes) {
    if (bytes.size() < kHeaderSize) {
        fail(path, "truncated LTP1 header: " + std::to_string(bytes.size()) + " bytes, need " +
                       std::to_string(kHeaderSize));
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    EmbeddingMatrix m;
    m.rows = read_u32_le(p + 8);
    m.cols = read_u32_le(p + 12);
    std::uint8_t tag = p[16];
    if (tag > static_cast<std::uint8_t>(Role::projection)) {
        fail(path, "unknown role tag " + std::to_string(tag) + " at byte 16");
    }
    m.role = static_cast<Role>(tag);
    if (m.rows == 0 || m.cols == 0) {
        fail(path, "header declares empty matrix " + std::to_string(m.rows) + "x" +
                       std::to_string(m.cols));
    }
    std::size_t count = m.rows * m.cols;
    std::size_t expected = kHeaderSize + count * 4;
    if (bytes.size() != expected) {
        fail(path, "payload size mismatch: header declares " + std::to_string(m.rows) + "x" +
                       std::to_string(m.cols) + " (" + std::to_string(expected) +
                       " bytes total), file has " + std::to_string(bytes.size()));
    }
    m.data.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        float v = read_f32_le(p + kHeaderSize + i * 4);
        if (!std::isfinite(v)) {
            fail(path, "non-finite value at element " + std::to_string(i) + " (byte " +
                           std::to_string(kHeaderSize + i * 4) + ")");
        }
        m.data[i] = v;
    }
    return m;
}

}  // namespace

std::string_view to_string(Role role) {
    switch (role) {
    case Role::visual:
        return "visual";
    case Role::text:
        return "text";
    case Role::cls:
        return "cls";
    case Role::projection:
        return "projection";
    }
    throw std::invalid_argument("unknown role");
}

Role parse_role(std::string_view name) {
    if (name == "visual") return Role::visual;
    if (name == "text") return Role::text;
    if (name == "cls") return Role::cls;
    if (name == "projection") return Role::projection;
    throw std::invalid_argument("unknown role '" + std::string(name) + "'");
}

void EmbeddingMatrix::validate() const {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix must have at least one row and one column");
    }
    if (data.size() != rows * cols) {
        throw std::invalid_argument("matrix data length " + std::to_string(data.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            throw std::invalid_argument("non-finite value at element " + std::to_string(i));
        }
    }
}

IndexMask IndexMask::identity(std::size_t total) {
    IndexMask mask;
    mask.total = total;
    mask.kept.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        mask.kept[i] = i;
    }
    return mask;
}

bool IndexMask::contains(std::size_t index) const {
    auto it = std::lower_bound(kept.begin(), kept.end(), index);
    return it != kept.end() && *it == index;
}

void IndexMask::validate() const {
    if (kept.empty()) {
        throw std::invalid_argument("mask must keep at least one index");
    }
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i] >= total) {
            throw std::invalid_argument("mask index " + std::to_string(kept[i]) +
                                        " out of range (total " + std::to_string(total) + ")");
        }
        if (i > 0 && kept[i] <= kept[i - 1]) {
            throw std::invalid_argument("mask indices must be strictly increasing (position " +
                                        std::to_string(i) + ")");
        }
    }
}

EmbeddingMatrix parse_csv_matrix(std::string_view text, Role role, std::string_view origin) {
    EmbeddingMatrix m;
    m.role = role;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (line.empty()) {
            continue;
        }

        std::size_t fields = 0;
        std::size_t cell_start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                std::string_view cell = line.substr(cell_start, i - cell_start);
                ++fields;
                float v = 0.0f;
                auto begin = cell.find_first_not_of(" \t");
                auto end = cell.find_last_not_of(" \t");
                if (begin == std::string_view::npos) {
                    throw io_error(std::string(origin) + ": line " + std::to_string(line_no) +
                                   ", column " + std::to_string(fields) + ": empty cell");
                }
                cell = cell.substr(begin, end - begin + 1);
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                    throw io_error(std::string(origin) + ": line " + std::to_string(line_no) +
                                   ", column " + std::to_string(fields) +
                                   ": invalid float literal '" + std::string(cell) + "'");
                }
                if (!std::isfinite(v)) {
                    throw io_error(std::string(origin) + ": line " + std::to_string(line_no) +
                                   ", column " + std::to_string(fields) + ": non-finite value");
                }
                m.data.push_back(v);
                cell_start = i + 1;
            }
        }
        if (m.rows == 0) {
            m.cols = fields;
        } else if (fields != m.cols) {
            throw io_error(std::string(origin) + ": line " + std::to_string(line_no) +
                           ": expected " + std::to_string(m.cols) + " columns, got " +
                           std::to_string(fields));
        }
        ++m.rows;
    }
    if (m.rows == 0) {
        throw io_error(std::string(origin) + ": no data rows");
    }
    return m;
}

EmbeddingMatrix load_matrix(const std::filesystem::path& path, Role csv_role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw io_error("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string bytes = buf.str();

    if (bytes.size() >= 8 && std::memcmp(bytes.data(), kMagic, 8) == 0) {
        return load_ltp1(path, bytes);
    }
    return parse_csv_matrix(bytes, csv_role, path.string());
}

void save_matrix(const EmbeddingMatrix& m, const std::filesystem::path& path) {
    m.validate();
    if (m.rows > std::numeric_limits<std::uint32_t>::max() ||
        m.cols > std::numeric_limits<std::uint32_t>::max()) {
        throw std::invalid_argument("matrix too large for LTP1 header");
    }
    std::vector<unsigned char> out(kHeaderSize + m.data.size() * 4);
    std::memcpy(out.data(), kMagic, 8);
    write_u32_le(static_cast<std::uint32_t>(m.rows), out.data() + 8);
    write_u32_le(static_cast<std::uint32_t>(m.cols), out.data() + 12);
    out[16] = static_cast<unsigned char>(m.role);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
        write_f32_le(m.data[i], out.data() + kHeaderSize + i * 4);
    }

    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw io_error("cannot open file for writing: " + path.string());
    }
    os.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!os) {
        throw io_error("write failed: " + path.string());
    }
}

IndexMask load_mask(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open file: " + path.string());
    }
    IndexMask mask;
    std::string line;
    std::size_t line_no = 0;
    bool have_total = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!have_total) {
            if (line.rfind("total=", 0) != 0) {
                throw io_error(path.string() + ": line 1: expected 'total=N' header, got '" +
                               line + "'");
            }
            std::string_view num{line};
            num.remove_prefix(6);
            std::size_t total = 0;
            auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), total);
            if (ec != std::errc{} || ptr != num.data() + num.size()) {
                throw io_error(path.string() + ": line 1: bad total '" + std::string(num) + "'");
            }
            mask.total = total;
            have_total = true;
            continue;
        }
        std::size_t index = 0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), index);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw io_error(path.string() + ": line " + std::to_string(line_no) +
                           ": bad index '" + line + "'");
        }
        if (index >= mask.total) {
            throw io_error(path.string() + ": line " + std::to_string(line_no) + ": index " +
                           std::to_string(index) + " out of range (total " +
                           std::to_string(mask.total) + ")");
        }
        if (!mask.kept.empty() && index <= mask.kept.back()) {
            throw io_error(path.string() + ": line " + std::to_string(line_no) +
                           ": duplicate or non-increasing index " + std::to_string(index));
        }
        mask.kept.push_back(index);
    }
    if (!have_total) {
        throw io_error(path.string() + ": missing 'total=N' header");
    }
    if (mask.kept.empty()) {
        throw io_error(path.string() + ": mask keeps no indices");
    }
    return mask;
}

void save_mask(const IndexMask& mask, const std::filesystem::path& path) {
    mask.validate();
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw io_error("cannot open file for writing: " + path.string());
    }
    os << "total=" << mask.total << "\n";
    for (std::size_t index : mask.kept) {
        os << index << "\n";
    }
    if (!os) {
        throw io_error("write failed: " + path.string());
    }
}

}  // namespace ltprune
