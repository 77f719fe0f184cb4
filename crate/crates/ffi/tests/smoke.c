#include <math.h>
#include <stdio.h>
#include "qrepeater.h"

#define CHECK(x) do { QrStatus s_ = (x); if (s_ != QR_STATUS_OK) { \
    fprintf(stderr, "%s: %s\n", #x, qr_status_message(s_)); return 1; } } while (0)

int main(void) {
    QrParams *p = NULL;
    CHECK(qr_params_new(1.0, 2.0, 6.0, 6.0, 0.0, 0.0, &p));

    QrComplex a[QR_STAGE_ONE_LEN];
    CHECK(qr_stage_one_coefficients(p, 0.0, a));

    uint32_t left, right;
    CHECK(qr_case_labels(1, &left, &right));
    QrFinalPair *fp = NULL;
    CHECK(qr_run_protocol(p, left, right, QR_LEVEL_E, QR_LEVEL_G, 2.0, 4.0, &fp));
    double n = -1.0;
    CHECK(qr_final_pair_negativity(fp, &n));
    qr_final_pair_free(fp);

    if (qr_run_protocol(p, left, right, 9, QR_LEVEL_G, 2.0, 4.0, &fp) != QR_STATUS_INVALID_ARGUMENT) return 2;
    if (qr_last_error_message() == NULL) return 3;
    qr_params_free(p);

    printf("%s %.12f\n", qr_version(), n);
    return (n >= 0.0 && n <= 0.5) ? 0 : 4;
}
