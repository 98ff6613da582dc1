// include/dsvae/common/io_util.h
//
// Copyright 2026 The dsvae Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DSVAE_COMMON_IO_UTIL_H_
#define DSVAE_COMMON_IO_UTIL_H_

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace dsvae::io {

// Little-endian primitives, independent of host byte order.
void write_u16(std::ostream& os, std::uint16_t v);
void write_u32(std::ostream& os, std::uint32_t v);
void write_f64(std::ostream& os, double v);
void write_bytes(std::ostream& os, std::string_view bytes);
// u32 length followed by raw bytes.
void write_string(std::ostream& os, std::string_view s);

std::uint16_t read_u16(std::istream& is);
std::uint32_t read_u32(std::istream& is);
double read_f64(std::istream& is);
std::string read_bytes(std::istream& is, std::size_t n);
std::string read_string(std::istream& is);

// Shortest decimal text that parses back to the identical double.
std::string format_double(double v);
double parse_double(std::string_view text);

// Parses UTF-8 "key=value" lines. Blank lines and lines starting with '#'
// are ignored; whitespace around key and value is trimmed. Throws
// InvalidArgument on a malformed line or a duplicated key.
std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    std::string_view origin);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

std::vector<std::string> split(std::string_view s, char sep);
std::string trim(std::string_view s);

}  // namespace dsvae::io

#endif  // DSVAE_COMMON_IO_UTIL_H_
