#pragma once

// Object-set signatures: the canonical digest of sobj(s, p).
//
// Canonical form: objects sorted bytewise ascending, duplicates removed, each
// object introduced by the separator byte 0x1F. Inside an object, 0x1F and the
// escape byte 0x1B are prefixed with 0x1B. The empty set has the empty
// canonical form; {""} is "\x1F", so the two never coincide.
//
// Digest: 128-bit BLAKE2b of the canonical form. The empty set gets the
// reserved all-zero digest.

#include <sodium.h>

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace keydisc {

inline constexpr char kSignatureSeparator = '\x1F';
inline constexpr char kSignatureEscape = '\x1B';

struct Digest128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend auto operator<=>(const Digest128&, const Digest128&) = default;

  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out(32, '0');
    for (int i = 0; i < 16; ++i) {
      out[static_cast<std::size_t>(15 - i)] = digits[(hi >> (4 * i)) & 0xF];
      out[static_cast<std::size_t>(31 - i)] = digits[(lo >> (4 * i)) & 0xF];
    }
    return out;
  }
};

struct Digest128Hash {
  std::size_t operator()(const Digest128& d) const noexcept { return static_cast<std::size_t>(d.hi ^ (d.lo * 0x9E3779B97F4A7C15ull)); }
};

inline constexpr Digest128 kEmptySetDigest{0, 0};

inline Digest128 digest128(std::string_view bytes) {
  static const bool ready = [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
    return true;
  }();
  (void)ready;
  std::array<unsigned char, 16> out{};
  crypto_generichash(out.data(), out.size(), reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
                     nullptr, 0);
  Digest128 d;
  for (int i = 0; i < 8; ++i) {
    d.hi = (d.hi << 8) | out[static_cast<std::size_t>(i)];
    d.lo = (d.lo << 8) | out[static_cast<std::size_t>(8 + i)];
  }
  return d;
}

struct ObjectSignature {
  Digest128 digest = kEmptySetDigest;
  std::optional<std::string> canonical;  // retained in exact mode

  bool is_empty_set() const { return digest == kEmptySetDigest; }

  // Exact comparison when both sides kept their canonical form.
  friend bool operator==(const ObjectSignature& a, const ObjectSignature& b) {
    if (a.canonical && b.canonical) return *a.canonical == *b.canonical;
    return a.digest == b.digest;
  }
};

inline void append_escaped(std::string& out, std::string_view object) {
  for (char c : object) {
    if (c == kSignatureSeparator || c == kSignatureEscape) out += kSignatureEscape;
    out += c;
  }
}

// `objects` must be sorted and free of duplicates.
inline std::string canonical_form_sorted(std::span<const std::string> objects) {
  std::string out;
  for (const auto& o : objects) {
    out += kSignatureSeparator;
    append_escaped(out, o);
  }
  return out;
}

inline std::vector<std::string> decode_canonical(std::string_view canonical) {
  std::vector<std::string> out;
  bool escaped = false;
  for (char c : canonical) {
    if (escaped) {
      out.back() += c;
      escaped = false;
    } else if (c == kSignatureEscape) {
      if (out.empty()) throw std::invalid_argument("canonical form must start with a separator");
      escaped = true;
    } else if (c == kSignatureSeparator) {
      out.emplace_back();
    } else {
      if (out.empty()) throw std::invalid_argument("canonical form must start with a separator");
      out.back() += c;
    }
  }
  if (escaped) throw std::invalid_argument("canonical form ends inside an escape");
  return out;
}

inline ObjectSignature signature_of_canonical(std::string canonical, bool keep_canonical = true) {
  ObjectSignature sig;
  if (!canonical.empty()) {
    sig.digest = digest128(canonical);
    if (sig.digest == kEmptySetDigest) sig.digest.lo = 1;
  }
  if (keep_canonical) sig.canonical = std::move(canonical);
  return sig;
}

// Signature of an object set given in any order, possibly with repeats.
inline ObjectSignature signature(std::vector<std::string> objects, bool keep_canonical = true) {
  std::sort(objects.begin(), objects.end());
  objects.erase(std::unique(objects.begin(), objects.end()), objects.end());
  return signature_of_canonical(canonical_form_sorted(objects), keep_canonical);
}

inline ObjectSignature empty_signature(bool keep_canonical = true) {
  ObjectSignature sig;
  if (keep_canonical) sig.canonical = std::string{};
  return sig;
}

}  // namespace keydisc
