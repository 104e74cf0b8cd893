#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace esnf::detail {

// FNV-1a accumulator; backs the config_digest fields on generated clouds.
class Fnv1a {
public:
    void absorb(const void* data, std::size_t n)
    {
        auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001b3ull;
        }
    }
    void absorb_u64(std::uint64_t v) { absorb(&v, sizeof v); }
    void absorb_d(double v) { absorb(&v, sizeof v); }
    void absorb_str(const std::string& s) { absorb(s.data(), s.size()); }

    std::string hex() const
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(h_));
        return std::string(buf);
    }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ull;
};

}  // namespace esnf::detail
