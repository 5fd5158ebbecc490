#ifndef TIMEBIN_QKD_H
#define TIMEBIN_QKD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum TbqkdStatus {
  TBQKD_STATUS_OK = 0,
  TBQKD_STATUS_NULL_POINTER = 1,
  TBQKD_STATUS_INVALID_PARAMETER = 2,
  TBQKD_STATUS_NO_STATISTICS = 3,
  TBQKD_STATUS_FORBIDDEN_STATE = 4,
  TBQKD_STATUS_INFEASIBLE = 5,
  TBQKD_STATUS_IO = 6,
  TBQKD_STATUS_PANIC = 7,
} TbqkdStatus;

typedef enum TbqkdEstimator {
  // Ideal phase error from all four X-basis probabilities.
  TBQKD_ESTIMATOR_IDEAL = 0,
  // Simplified receiver: Z basis plus one `|->` projection.
  TBQKD_ESTIMATOR_SIMPLIFIED = 1,
  // Time-bin monitoring line, conditional probabilities.
  TBQKD_ESTIMATOR_MONITORING_LINE = 2,
  // Time-bin monitoring line, joint probabilities of the efficient encoding.
  TBQKD_ESTIMATOR_JOINT = 3,
} TbqkdEstimator;

typedef enum TbqkdProtocol {
  // Three-state protocol, one-decoy weak coherent source.
  TBQKD_PROTOCOL_DECOY = 0,
  // Three-state protocol, ideal single-photon source.
  TBQKD_PROTOCOL_SINGLE_PHOTON = 1,
  // Four-state BB84, ideal single-photon source.
  TBQKD_PROTOCOL_BB84 = 2,
} TbqkdProtocol;

// Opaque collective attack.
typedef struct TbqkdAttack TbqkdAttack;

typedef struct TbqkdChannel {
  double attenuation_db;
  double p_dc;
  double e_mis;
  double det_eff;
} TbqkdChannel;

// Source parameters. `mu1`, `mu2`, `p_mu1` are ignored by the
// single-photon protocols.
typedef struct TbqkdSource {
  double mu1;
  double mu2;
  double p_mu1;
  double p_z;
} TbqkdSource;

typedef struct TbqkdFiniteKey {
  uint64_t rounds;
  double eps_sec;
  double eps_cor;
  // Per-bound Hoeffding failure probability; 0 selects `eps_sec / 19`.
  double eps_hoeffding;
  double ec_efficiency;
} TbqkdFiniteKey;

typedef struct TbqkdKeyRate {
  double key_length;
  double rate;
  double qber_z;
  double n_z;
  double d0_z_lower;
  double d1_z_lower;
  double ex_upper;
  double gamma;
  double ez_upper;
  double lambda_ec;
  // Nonzero when the key length was forced to 0 for lack of statistics.
  bool aborted;
} TbqkdKeyRate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread, or null. The pointer
// stays valid until the next failing call on this thread.
const char *tbqkd_last_error(void);

// Library version as a static NUL-terminated string.
const char *tbqkd_version(void);

double tbqkd_binary_entropy(double x);

// Attack that leaves the qubit untouched, with an ancilla of dimension `dim`.
//
// # Safety
// `out` must be valid for writes.
enum TbqkdStatus tbqkd_attack_identity(uintptr_t dim, struct TbqkdAttack **out);

// Z-basis intercept-resend attack.
//
// # Safety
// `out` must be valid for writes.
enum TbqkdStatus tbqkd_attack_intercept_resend(struct TbqkdAttack **out);

// Attack applying a Z phase flip.
//
// # Safety
// `out` must be valid for writes.
enum TbqkdStatus tbqkd_attack_phase_flip(uintptr_t dim, struct TbqkdAttack **out);

// Random isometry with ancilla dimension `dim` and roughly `loss_weight`
// of the mass in the vacuum component.
//
// # Safety
// `out` must be valid for writes.
enum TbqkdStatus tbqkd_attack_random(uintptr_t dim,
                                     double loss_weight,
                                     uint64_t seed,
                                     struct TbqkdAttack **out);

// Releases an attack. Null is ignored.
//
// # Safety
// `attack` must be null or a handle from a `tbqkd_attack_*` constructor
// that has not been freed.
void tbqkd_attack_free(struct TbqkdAttack *attack);

// Phase error of `attack` under `estimator`, clamped to `[0, 1]`. `p_z`
// is only read by `Joint`.
//
// # Safety
// `attack` must be a live handle; `out` must be valid for writes.
enum TbqkdStatus tbqkd_phase_error(const struct TbqkdAttack *attack,
                                   enum TbqkdEstimator estimator,
                                   double p_z,
                                   double *out);

// Key length on the expected counts of an honest channel.
//
// # Safety
// Input pointers must reference live values; `out` must be valid for writes.
enum TbqkdStatus tbqkd_key_rate(const struct TbqkdChannel *channel_params,
                                enum TbqkdProtocol protocol,
                                const struct TbqkdSource *source,
                                const struct TbqkdFiniteKey *finite_key,
                                struct TbqkdKeyRate *out);

// Maximizes the key rate over the default search box. The best source
// parameters go to `out_source`, their key rate to `out`.
//
// # Safety
// Input pointers must reference live values; outputs must be valid for writes.
enum TbqkdStatus tbqkd_optimize(const struct TbqkdChannel *channel_params,
                                enum TbqkdProtocol protocol,
                                const struct TbqkdFiniteKey *finite_key,
                                struct TbqkdSource *out_source,
                                struct TbqkdKeyRate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TIMEBIN_QKD_H */
