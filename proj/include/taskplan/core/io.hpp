#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "taskplan/core/tensor.hpp"

namespace taskplan::io {

// On-disk array blob:
//   magic  "TPARR001"            8 bytes
//   dtype  u32 little-endian     1=u8 2=i32 3=f32 4=i64 5=f64 6=utf8 bytes
//   ndim   u32
//   dims   u64 x ndim
//   data   raw little-endian payload
enum class Dtype : uint32_t {
  U8 = 1,
  I32 = 2,
  F32 = 3,
  I64 = 4,
  F64 = 5,
  Str = 6,
};

struct Blob {
  Dtype dtype = Dtype::U8;
  std::vector<int64_t> shape;
  std::vector<uint8_t> raw;

  static Blob from(const Tensor<uint8_t>& t);
  static Blob from(const Tensor<int32_t>& t);
  static Blob from(const Tensor<float>& t);
  static Blob from(const Tensor<int64_t>& t);
  static Blob from(const Tensor<double>& t);
  static Blob from_string(const std::string& s);

  Tensor<uint8_t> as_u8() const;
  Tensor<int32_t> as_i32() const;
  Tensor<float> as_f32() const;
  Tensor<int64_t> as_i64() const;
  Tensor<double> as_f64() const;
  std::string as_string() const;

  int64_t numel() const { return Tensor<uint8_t>::numel_of(shape); }
};

void write_blob(std::ostream& os, const Blob& b);
Blob read_blob(std::istream& is);

// A record is an ordered list of named blobs; shard files are plain
// concatenations of records. Every record in a shard carries the same
// field set.
struct Record {
  std::vector<std::pair<std::string, Blob>> fields;

  void add(const std::string& name, Blob b) { fields.emplace_back(name, std::move(b)); }
  const Blob& get(const std::string& name) const;
  bool has(const std::string& name) const;
};

void write_record(std::ostream& os, const Record& r);
bool read_record(std::istream& is, Record& out);  // false on clean EOF

std::vector<Record> read_shard(const std::string& path);
void write_shard(const std::string& path, const std::vector<Record>& recs);

// Checkpoint container: u64 header length + JSON header + named blobs.
struct Container {
  std::string header_json;
  std::vector<std::pair<std::string, Blob>> blobs;

  const Blob& get(const std::string& name) const;
};

void write_container(const std::string& path, const Container& c);
Container read_container(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace taskplan::io
