#pragma once

// Single-file on-disk index, little-endian throughout.
//
//   offset  size  field
//   0       8     magic "KDISCIDX"
//   8       4     format version (1)
//   12      4     flags: bit 0 canonical forms present, bit 1 hashed score mode
//   16      8     subject count S
//   24      8     property count P
//   32      8     dictionary size D (code 0 is the empty set)
//   40      8     record count R
//   48      ...   S subject labels, then P property labels (u32 length + bytes)
//           ...   D dictionary entries: u64 digest hi, u64 digest lo,
//                 and u32 length + canonical bytes when bit 0 is set
//           ...   zero padding to a multiple of 8
//           8(S+1) subject offsets: index of each subject's first record
//           28R   records sorted by (subject, property): u32 subject,
//                 u32 property, u32 code, u64 digest hi, u64 digest lo
//
// Only non-empty cells are stored; a missing (subject, property) record is
// the empty object set. Lookups binary-search the subject's record range.

#include "keydisc/class_table.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

namespace keydisc {

inline constexpr char kIndexMagic[8] = {'K', 'D', 'I', 'S', 'C', 'I', 'D', 'X'};
inline constexpr std::uint32_t kIndexVersion = 1;
inline constexpr std::uint32_t kFlagCanonical = 1u << 0;
inline constexpr std::uint32_t kFlagHashed = 1u << 1;
inline constexpr std::size_t kRecordSize = 28;

namespace detail {

class ByteWriter {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  void bytes(std::string_view s) { buf_.append(s); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }
  void pad(std::size_t alignment) {
    while (buf_.size() % alignment != 0) buf_.push_back('\0');
  }
  std::size_t size() const { return buf_.size(); }
  const std::string& data() const { return buf_; }
  void clear() { buf_.clear(); }

 private:
  std::string buf_;
};

inline std::uint32_t load_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline std::uint64_t load_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

class MappedFile {
 public:
  explicit MappedFile(const std::filesystem::path& path) : path_(path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw IndexError(path, "open", std::strerror(errno));
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
      ::close(fd_);
      throw IndexError(path, "stat", std::strerror(errno));
    }
    size_ = static_cast<std::size_t>(st.st_size);
    if (size_ > 0) {
      void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd_, 0);
      if (p == MAP_FAILED) {
        ::close(fd_);
        throw IndexError(path, "mmap", std::strerror(errno));
      }
      data_ = static_cast<const unsigned char*>(p);
    }
  }
  MappedFile(const MappedFile&) = delete;
  MappedFile& operator=(const MappedFile&) = delete;
  ~MappedFile() {
    if (data_) ::munmap(const_cast<unsigned char*>(data_), size_);
    if (fd_ >= 0) ::close(fd_);
  }

  const unsigned char* data() const { return data_; }
  std::size_t size() const { return size_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  const unsigned char* data_ = nullptr;
  std::size_t size_ = 0;
};

class ByteReader {
 public:
  ByteReader(const MappedFile& file) : file_(file) {}

  void need(std::size_t n) const {
    if (pos_ + n > file_.size()) throw IndexError(file_.path(), "read", "truncated index file");
  }
  std::uint32_t u32() {
    need(4);
    auto v = load_u32(file_.data() + pos_);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    auto v = load_u64(file_.data() + pos_);
    pos_ += 8;
    return v;
  }
  std::string str() {
    auto n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(file_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  void align(std::size_t alignment) { pos_ = (pos_ + alignment - 1) / alignment * alignment; }
  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) {
    need(n);
    pos_ += n;
  }

 private:
  const MappedFile& file_;
  std::size_t pos_ = 0;
};

}  // namespace detail

class DiskCellStore final : public CellStore {
 public:
  DiskCellStore(std::shared_ptr<detail::MappedFile> file, std::size_t subjects, std::size_t offsets_pos,
                std::size_t records_pos, std::size_t record_count)
      : file_(std::move(file)),
        subjects_(subjects),
        offsets_(file_->data() + offsets_pos),
        records_(file_->data() + records_pos),
        record_count_(record_count) {}

  BackendKind kind() const override { return BackendKind::disk; }

  std::span<const CellCode> column(std::size_t property, std::vector<CellCode>& scratch) const override {
    scratch.resize(subjects_);
    for (std::size_t s = 0; s < subjects_; ++s) scratch[s] = cell(s, property);
    return scratch;
  }

  CellCode cell(std::size_t subject, std::size_t property) const override {
    auto lo = detail::load_u64(offsets_ + 8 * subject);
    auto hi = detail::load_u64(offsets_ + 8 * (subject + 1));
    while (lo < hi) {
      auto mid = lo + (hi - lo) / 2;
      auto p = detail::load_u32(records_ + mid * kRecordSize + 4);
      if (p < property) lo = mid + 1;
      else if (p > property) hi = mid;
      else return detail::load_u32(records_ + mid * kRecordSize + 8);
    }
    return kEmptyCell;
  }

  std::size_t record_count() const { return record_count_; }

 private:
  std::shared_ptr<detail::MappedFile> file_;
  std::size_t subjects_;
  const unsigned char* offsets_;
  const unsigned char* records_;
  std::size_t record_count_;
};

inline void write_index_file(const std::filesystem::path& path, const std::vector<std::string>& subjects,
                             const std::vector<std::string>& properties,
                             const std::vector<ObjectSignature>& dictionary, ScoreMode mode,
                             const std::vector<std::vector<CellCode>>& columns) {
  const bool canonical = mode == ScoreMode::exact;
  std::uint64_t record_count = 0;
  for (const auto& col : columns)
    for (auto c : col) record_count += c != kEmptyCell;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IndexError(path, "create", std::strerror(errno));

  detail::ByteWriter w;
  w.bytes(std::string_view(kIndexMagic, sizeof kIndexMagic));
  w.u32(kIndexVersion);
  w.u32((canonical ? kFlagCanonical : 0u) | (mode == ScoreMode::hashed ? kFlagHashed : 0u));
  w.u64(subjects.size());
  w.u64(properties.size());
  w.u64(dictionary.size());
  w.u64(record_count);
  for (const auto& s : subjects) w.str(s);
  for (const auto& p : properties) w.str(p);
  for (const auto& sig : dictionary) {
    w.u64(sig.digest.hi);
    w.u64(sig.digest.lo);
    if (canonical) w.str(sig.canonical.value_or(std::string{}));
  }
  w.pad(8);

  std::uint64_t next = 0;
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    w.u64(next);
    for (const auto& col : columns) next += col[s] != kEmptyCell;
  }
  w.u64(next);
  out.write(w.data().data(), static_cast<std::streamsize>(w.size()));

  // Records are streamed in subject-major order to bound the buffer.
  w.clear();
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    for (std::size_t p = 0; p < columns.size(); ++p) {
      auto code = columns[p][s];
      if (code == kEmptyCell) continue;
      w.u32(static_cast<std::uint32_t>(s));
      w.u32(static_cast<std::uint32_t>(p));
      w.u32(code);
      w.u64(dictionary[code].digest.hi);
      w.u64(dictionary[code].digest.lo);
    }
    if (w.size() > (1u << 20)) {
      out.write(w.data().data(), static_cast<std::streamsize>(w.size()));
      w.clear();
    }
  }
  out.write(w.data().data(), static_cast<std::streamsize>(w.size()));
  out.flush();
  if (!out) throw IndexError(path, "write", std::strerror(errno));
}

// Reopens a persisted index. The dictionaries are loaded; cells stay mapped.
inline ClassTable open_table(const std::filesystem::path& path) {
  auto file = std::make_shared<detail::MappedFile>(path);
  detail::ByteReader r(*file);
  r.need(sizeof kIndexMagic);
  if (std::memcmp(file->data(), kIndexMagic, sizeof kIndexMagic) != 0)
    throw IndexError(path, "open", "bad magic bytes");
  r.skip(sizeof kIndexMagic);
  if (auto version = r.u32(); version != kIndexVersion)
    throw IndexError(path, "open", "unsupported format version " + std::to_string(version));
  const auto flags = r.u32();
  const auto subject_count = r.u64();
  const auto property_count = r.u64();
  const auto dictionary_count = r.u64();
  const auto record_count = r.u64();

  std::vector<std::string> subjects;
  subjects.reserve(subject_count);
  for (std::uint64_t i = 0; i < subject_count; ++i) subjects.push_back(r.str());
  std::vector<std::string> properties;
  for (std::uint64_t i = 0; i < property_count; ++i) properties.push_back(r.str());

  const bool canonical = flags & kFlagCanonical;
  std::vector<ObjectSignature> dictionary;
  dictionary.reserve(dictionary_count);
  for (std::uint64_t i = 0; i < dictionary_count; ++i) {
    ObjectSignature sig;
    sig.digest.hi = r.u64();
    sig.digest.lo = r.u64();
    if (canonical) sig.canonical = r.str();
    dictionary.push_back(std::move(sig));
  }
  r.align(8);
  const auto offsets_pos = r.pos();
  r.skip(8 * (subject_count + 1));
  const auto records_pos = r.pos();
  r.skip(kRecordSize * record_count);
  if (detail::load_u64(file->data() + offsets_pos + 8 * subject_count) != record_count)
    throw IndexError(path, "open", "record count does not match subject offsets");

  auto mode = (flags & kFlagHashed) ? ScoreMode::hashed : ScoreMode::exact;
  auto store = std::make_shared<DiskCellStore>(std::move(file), subject_count, offsets_pos, records_pos, record_count);
  return ClassTable(std::move(subjects), std::move(properties), std::move(dictionary), mode, std::move(store));
}

inline void save_table(const ClassTable& table, const std::filesystem::path& path) {
  std::vector<std::vector<CellCode>> columns;
  std::vector<CellCode> scratch;
  for (std::size_t p = 0; p < table.property_count(); ++p) {
    auto col = table.column(p, scratch);
    columns.emplace_back(col.begin(), col.end());
  }
  write_index_file(path, table.subjects(), table.properties(), table.dictionary(), table.score_mode(), columns);
}

}  // namespace keydisc
