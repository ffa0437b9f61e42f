/* Minimal consumer of the C API: fit, evaluate, query a constant. */
#include "../include/epdensity.h"
#include <stdio.h>

int main(void) {
    double sample[40];
    for (int i = 0; i < 40; i++) {
        sample[i] = ((i * 7) % 40) / 40.0;
    }
    EpEstimate *est = NULL;
    EpStatus status = ep_fit_finite(sample, 40, &est);
    if (status != EP_STATUS_OK) {
        fprintf(stderr, "fit failed: %s\n", ep_status_message(status));
        return 1;
    }
    double value = 0.0;
    if (ep_estimate_eval(est, 0.5, &value) != EP_STATUS_OK) {
        return 1;
    }
    size_t blocks = 0;
    if (ep_estimate_block_count(est, &blocks) != EP_STATUS_OK) {
        return 1;
    }
    ep_estimate_free(est);

    double constant = 0.0;
    if (ep_pinsker_constant(2.0, 1.0, &constant) != EP_STATUS_OK) {
        return 1;
    }
    /* expect a too-small error code on a 3-point sample */
    EpStatus small = ep_fit_finite(sample, 3, &est);
    if (small != EP_STATUS_SAMPLE_TOO_SMALL) {
        return 1;
    }
    printf("f(0.5)=%.12f blocks=%zu P(2,1)=%.12f\n", value, blocks, constant);
    return 0;
}
