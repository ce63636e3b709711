#ifndef PPIKIT_H
#define PPIKIT_H

/* Generated by cbindgen from the ppikit-ffi crate; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Embedding length; `ppk_embed` writes exactly this many doubles.
#define PPK_EMBED_DIM 20

// Structure file dialect for `ppk_structure_parse`.
typedef enum PpkFormat {
  // Decide from the content.
  PPK_FORMAT_AUTO = 0,
  PPK_FORMAT_PDB = 1,
  PPK_FORMAT_MMCIF = 2,
} PpkFormat;

// Outcome of a fallible call. Anything but `Ok` leaves a message for
// `ppk_last_error`.
typedef enum PpkStatus {
  PPK_STATUS_OK = 0,
  // A pointer was null, an index out of range or a number out of domain.
  PPK_STATUS_INVALID_ARGUMENT = 1,
  // The input text is not a readable structure file.
  PPK_STATUS_PARSE_ERROR = 2,
  // An interface chain has no residues, so it cannot be embedded.
  PPK_STATUS_EMPTY_CHAIN = 3,
  // The requested name does not exist.
  PPK_STATUS_NOT_FOUND = 4,
} PpkStatus;

// Interfaces extracted from one structure. Opaque; release with
// `ppk_interface_set_free`.
typedef struct PpkInterfaceSet PpkInterfaceSet;

// A parsed structure. Opaque; release with `ppk_structure_free`.
typedef struct PpkStructure PpkStructure;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the most recent failure on this thread, as a NUL-terminated
// UTF-8 string. Empty before any failure. The pointer stays valid until the
// next failing call on the same thread.
const char *ppk_last_error(void);

// Parse a PDB or mmCIF file from memory.
//
// `fallback_id` names the entry when the file does not; it is also the only
// accepted source of an id for header-less files. On success `*out` owns the
// structure.
//
// # Safety
// `text` and `fallback_id` must be NUL-terminated; `out` must be a valid
// destination for one pointer.
enum PpkStatus ppk_structure_parse(const char *text,
                                   enum PpkFormat format,
                                   const char *fallback_id,
                                   struct PpkStructure **out);

// Release a structure. Null is a no-op.
//
// # Safety
// `structure` must come from `ppk_structure_parse` and not be used again.
void ppk_structure_free(struct PpkStructure *structure);

// Number of chains, or 0 for null.
//
// # Safety
// `structure` must be live or null.
size_t ppk_structure_chain_count(const struct PpkStructure *structure);

// Extract every pairwise interface at the given heavy-atom cutoff.
//
// An empty set is a valid result. On success `*out` owns the set.
//
// # Safety
// `structure` must be live; `out` must be a valid destination for one
// pointer.
enum PpkStatus ppk_extract(const struct PpkStructure *structure,
                           double cutoff,
                           struct PpkInterfaceSet **out);

// Release an interface set. Null is a no-op.
//
// # Safety
// `set` must come from `ppk_extract` and not be used again.
void ppk_interface_set_free(struct PpkInterfaceSet *set);

// Number of interfaces, or 0 for null.
//
// # Safety
// `set` must be live or null.
size_t ppk_interface_count(const struct PpkInterfaceSet *set);

// Id of one interface, or null when the index is out of range. The pointer
// stays valid as long as the set lives.
//
// # Safety
// `set` must be live or null.
const char *ppk_interface_id(const struct PpkInterfaceSet *set, size_t index);

// Embed one interface into `out[0..20]` with the given length scale.
//
// # Safety
// `set` must be live; `out` must point at 20 writable doubles.
enum PpkStatus ppk_embed(const struct PpkInterfaceSet *set,
                         size_t index,
                         double alpha,
                         double *out);

// Euclidean distance between two embeddings, or NaN for null input.
//
// # Safety
// Non-null arguments must point at 20 readable doubles.
double ppk_idist(const double *a, const double *b);

// 1 when the embeddings are near-duplicates at threshold `tau`, 0 when not,
// -1 on error.
//
// # Safety
// Non-null arguments must point at 20 readable doubles.
int ppk_is_near_duplicate(const double *a, const double *b, double tau);

// Look up a calibrated preset ("dips6" or "ppiref10") and write its cutoff,
// duplicate threshold and length scale into any non-null destinations.
//
// # Safety
// `name` must be NUL-terminated; non-null destinations must be writable.
enum PpkStatus ppk_preset(const char *name, double *cutoff, double *tau, double *alpha);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* PPIKIT_H */
