// Copyright 2026 The qtrader Authors
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

#include "qtrader/diffnet/serialize.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "qtrader/common/error.hpp"

namespace qtrader::diffnet {

namespace {

constexpr std::array<char, 8> kMagic{'Q', 'T', 'R', 'P', 'A', 'R', '0', '1'};

template <typename T>
void put(std::ostream &out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes{};
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    out.write(bytes.data(), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    std::array<char, sizeof(T)> bytes{};
    if (!in.read(bytes.data(), sizeof(T))) {
        throw UsageError("checkpoint truncated");
    }
    if constexpr (std::endian::native == std::endian::big) {
        std::reverse(bytes.begin(), bytes.end());
    }
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

void write_parameters(std::ostream &out, const ConstParameterList &params) {
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
    for (const auto *p : params) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        put<std::uint32_t>(out, static_cast<std::uint32_t>(p->shape.size()));
        for (auto d : p->shape) {
            put<std::uint64_t>(out, d);
        }
    }
    for (const auto *p : params) {
        for (double v : p->value) {
            put<double>(out, v);
        }
    }
    if (!out) {
        throw UsageError("failed writing checkpoint");
    }
}

void read_parameters(std::istream &in, const ParameterList &params) {
    std::array<char, 8> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
        throw UsageError("not a qtrader parameter checkpoint");
    }
    const auto count = get<std::uint32_t>(in);
    if (count != params.size()) {
        throw UsageError(fmt::format("checkpoint holds {} tensors, model has {}", count, params.size()));
    }
    for (const auto *p : params) {
        const auto name_len = get<std::uint32_t>(in);
        std::string name(name_len, '\0');
        if (!in.read(name.data(), name_len)) {
            throw UsageError("checkpoint truncated");
        }
        const auto rank = get<std::uint32_t>(in);
        std::vector<std::size_t> shape(rank);
        for (auto &d : shape) {
            d = static_cast<std::size_t>(get<std::uint64_t>(in));
        }
        if (name != p->name || shape != p->shape) {
            throw UsageError(fmt::format("checkpoint tensor '{}' does not match model tensor '{}'", name, p->name));
        }
    }
    for (auto *p : params) {
        for (auto &v : p->value) {
            v = get<double>(in);
        }
    }
}

void save_parameters(const std::filesystem::path &path, const ConstParameterList &params) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw UsageError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    write_parameters(out, params);
}

void load_parameters(const std::filesystem::path &path, const ParameterList &params) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError(fmt::format("cannot open checkpoint '{}'", path.string()));
    }
    read_parameters(in, params);
}

} // namespace qtrader::diffnet
