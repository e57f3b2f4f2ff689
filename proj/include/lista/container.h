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

#ifndef LISTA_CONTAINER_H_
#define LISTA_CONTAINER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lista/common.h"

namespace lista {

using Json = nlohmann::ordered_json;

// Binary container shared by datasets and parameter blobs:
//   4-byte magic | u16 LE version | u32 LE header length | JSON header |
//   float64 LE arrays (row-major) | u64 LE FNV-1a of all preceding bytes.
// The header gains an "arrays" list of {name, rows, cols} in storage order.
struct NamedMatrix {
  std::string name;
  Matrix value;
};

struct Container {
  Json header;
  std::vector<NamedMatrix> arrays;

  const Matrix& array(std::string_view name) const;
  bool has_array(std::string_view name) const;
};

std::string encode_container(std::string_view magic, std::uint16_t version,
                             Json header,
                             const std::vector<NamedMatrix>& arrays);

// Throws kFormat on wrong magic/version or malformed layout, kChecksum on a
// checksum mismatch or truncation. Nothing partial is returned.
Container decode_container(std::string_view bytes, std::string_view magic,
                           std::uint16_t version);

// Whole-file helpers; failures throw kIo.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace lista

#endif  // LISTA_CONTAINER_H_
