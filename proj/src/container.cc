// Copyright 2026 The LISTA Design Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lista/container.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace lista {

namespace {

static_assert(std::endian::native == std::endian::little,
              "container encoding assumes a little-endian host");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

template <class T>
T get(std::string_view bytes, std::size_t at) {
  T v;
  std::memcpy(&v, bytes.data() + at, sizeof(T));
  return v;
}

constexpr std::size_t kPrefix = 4 + 2 + 4;
constexpr std::size_t kTrailer = 8;

}  // namespace

const Matrix& Container::array(std::string_view name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return a.value;
  }
  fail(ErrorKind::kFormat, "container has no array '" + std::string(name) + "'");
}

bool Container::has_array(std::string_view name) const {
  for (const auto& a : arrays) {
    if (a.name == name) return true;
  }
  return false;
}

std::string encode_container(std::string_view magic, std::uint16_t version,
                             Json header,
                             const std::vector<NamedMatrix>& arrays) {
  Json shapes = Json::array();
  for (const auto& a : arrays) {
    shapes.push_back({{"name", a.name},
                      {"rows", a.value.rows()},
                      {"cols", a.value.cols()}});
  }
  header["arrays"] = shapes;
  const std::string text = header.dump();

  std::string out;
  out.append(magic.data(), magic.size());
  put<std::uint16_t>(out, version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  for (const auto& a : arrays) {
    // Row-major on disk.
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
        rm = a.value;
    out.append(reinterpret_cast<const char*>(rm.data()),
               sizeof(double) * static_cast<std::size_t>(rm.size()));
  }
  put<std::uint64_t>(out, fnv1a64(out));
  return out;
}

Container decode_container(std::string_view bytes, std::string_view magic,
                           std::uint16_t version) {
  if (bytes.substr(0, 4) != magic.substr(0, std::min(bytes.size(), magic.size()))) {
    fail(ErrorKind::kFormat, "bad magic: expected '" + std::string(magic) + "'");
  }
  if (bytes.size() < kPrefix + kTrailer) {
    fail(ErrorKind::kChecksum, "file truncated");
  }
  if (get<std::uint16_t>(bytes, 4) != version) {
    fail(ErrorKind::kFormat,
         "unsupported version " + std::to_string(get<std::uint16_t>(bytes, 4)));
  }
  const std::string_view body = bytes.substr(0, bytes.size() - kTrailer);
  if (fnv1a64(body) != get<std::uint64_t>(bytes, body.size())) {
    fail(ErrorKind::kChecksum, "checksum mismatch (corrupted or truncated)");
  }

  const std::size_t header_len = get<std::uint32_t>(bytes, 6);
  if (kPrefix + header_len > body.size()) {
    fail(ErrorKind::kFormat, "header length exceeds file size");
  }
  Container c;
  try {
    c.header = Json::parse(body.substr(kPrefix, header_len));
  } catch (const Json::exception& e) {
    fail(ErrorKind::kFormat, std::string("malformed header: ") + e.what());
  }

  std::size_t at = kPrefix + header_len;
  try {
    for (const auto& shape : c.header.at("arrays")) {
      const auto rows = shape.at("rows").get<Eigen::Index>();
      const auto cols = shape.at("cols").get<Eigen::Index>();
      if (rows < 0 || cols < 0) fail(ErrorKind::kFormat, "negative array shape");
      const std::size_t nbytes =
          sizeof(double) * static_cast<std::size_t>(rows * cols);
      if (at + nbytes > body.size()) {
        fail(ErrorKind::kFormat, "array data exceeds file size");
      }
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(
          rows, cols);
      std::memcpy(rm.data(), body.data() + at, nbytes);
      at += nbytes;
      c.arrays.push_back({shape.at("name").get<std::string>(), Matrix(rm)});
    }
  } catch (const Json::exception& e) {
    fail(ErrorKind::kFormat, std::string("malformed array table: ") + e.what());
  }
  if (at != body.size()) fail(ErrorKind::kFormat, "trailing bytes after arrays");
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorKind::kIo, "read failed: " + path.string());
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kIo, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::kIo, "write failed: " + path.string());
}

}  // namespace lista
