/*******************************************************************************
 * include/rmat/edge_io.hpp
 *
 * Edge list output. Binary files are consecutive (u, v) records of two
 * little-endian uint64 values without a header; text files hold one decimal
 * "u v" pair per line. Output goes to a temporary file next to the target and
 * is renamed into place on commit, so failed runs leave no partial file.
 ******************************************************************************/
#pragma once

#include <rmat/edge.hpp>
#include <rmat/error.hpp>

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace rmat {

enum class EdgeFormat { binary, text, none };

inline EdgeFormat parse_format(const std::string& s) {
    if (s == "binary")
        return EdgeFormat::binary;
    if (s == "text")
        return EdgeFormat::text;
    if (s == "none")
        return EdgeFormat::none;
    throw error(errc::invalid_config, "unknown format '" + s + "'");
}

inline constexpr size_t kBinaryRecordBytes = 16;

inline void store_le64(char* out, uint64_t x) {
    for (int i = 0; i < 8; ++i)
        out[i] = static_cast<char>((x >> (8 * i)) & 0xff);
}

inline uint64_t load_le64(const char* in) {
    uint64_t x = 0;
    for (int i = 0; i < 8; ++i)
        x |= static_cast<uint64_t>(static_cast<unsigned char>(in[i])) << (8 * i);
    return x;
}

class EdgeWriter {
public:
    EdgeWriter(std::filesystem::path target, EdgeFormat format)
        : target_(std::move(target)), format_(format) {
        if (format_ == EdgeFormat::none)
            return;
        temp_ = target_;
        temp_ += ".partial";
        out_.open(temp_, std::ios::binary | std::ios::trunc);
        if (!out_)
            throw error(errc::io_error, "cannot open " + temp_.string());
    }

    EdgeWriter(const EdgeWriter&) = delete;
    EdgeWriter& operator=(const EdgeWriter&) = delete;

    ~EdgeWriter() {
        if (format_ != EdgeFormat::none && !committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(temp_, ec);
        }
    }

    void write(std::span<const Edge> edges) {
        written_ += edges.size();
        if (format_ == EdgeFormat::none)
            return;
        buffer_.clear();
        if (format_ == EdgeFormat::binary) {
            buffer_.resize(edges.size() * kBinaryRecordBytes);
            char* p = buffer_.data();
            for (const Edge& e : edges) {
                store_le64(p, e.u);
                store_le64(p + 8, e.v);
                p += kBinaryRecordBytes;
            }
        } else {
            buffer_.reserve(edges.size() * 16);
            std::array<char, 48> line;
            for (const Edge& e : edges) {
                char* p = std::to_chars(line.data(), line.data() + 20, e.u).ptr;
                *p++ = ' ';
                p = std::to_chars(p, p + 20, e.v).ptr;
                *p++ = '\n';
                buffer_.insert(buffer_.end(), line.data(), p);
            }
        }
        out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
        if (!out_)
            throw error(errc::io_error, "write to " + temp_.string() + " failed");
    }

    void commit() {
        if (format_ == EdgeFormat::none)
            return;
        out_.close();
        if (!out_)
            throw error(errc::io_error, "closing " + temp_.string() + " failed");
        std::error_code ec;
        std::filesystem::rename(temp_, target_, ec);
        if (ec)
            throw error(errc::io_error, "rename to " + target_.string() + ": " + ec.message());
        committed_ = true;
    }

    uint64_t written() const { return written_; }

private:
    std::filesystem::path target_, temp_;
    EdgeFormat format_;
    std::ofstream out_;
    std::vector<char> buffer_;
    uint64_t written_ = 0;
    bool committed_ = false;
};

inline std::vector<Edge> read_binary_edges(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io_error, "cannot open " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % kBinaryRecordBytes != 0)
        throw error(errc::io_error, path.string() + " is not a whole number of edge records");
    std::vector<Edge> edges(bytes.size() / kBinaryRecordBytes);
    for (size_t i = 0; i < edges.size(); ++i)
        edges[i] = {load_le64(&bytes[i * kBinaryRecordBytes]),
                    load_le64(&bytes[i * kBinaryRecordBytes + 8])};
    return edges;
}

} // namespace rmat
