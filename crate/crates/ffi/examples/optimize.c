#include <stdio.h>
#include "timebin_qkd.h"

int main(void) {
    TbqkdChannel ch = {.attenuation_db = 10.0, .p_dc = 1e-10, .e_mis = 0.01, .det_eff = 1.0};
    TbqkdFiniteKey fk = {.rounds = 100000000, .eps_sec = 1e-9, .eps_cor = 1e-9,
                         .eps_hoeffding = 0.0, .ec_efficiency = 1.16};
    TbqkdSource src;
    TbqkdKeyRate out;
    if (tbqkd_optimize(&ch, TBQKD_PROTOCOL_DECOY, &fk, &src, &out) != TBQKD_STATUS_OK) {
        fprintf(stderr, "%s\n", tbqkd_last_error());
        return 1;
    }
    printf("rate %.4e at mu1=%.3f mu2=%.3f p_z=%.3f\n", out.rate, src.mu1, src.mu2, src.p_z);

    TbqkdAttack *attack = NULL;
    double ex;
    tbqkd_attack_intercept_resend(&attack);
    tbqkd_phase_error(attack, TBQKD_ESTIMATOR_MONITORING_LINE, 0.0, &ex);
    tbqkd_attack_free(attack);
    printf("intercept-resend e_x = %.3f\n", ex);
    return 0;
}
