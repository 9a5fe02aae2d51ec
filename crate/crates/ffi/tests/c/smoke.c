#include <math.h>
#include <stdio.h>
#include <string.h>

#include "swkb.h"

#define CHECK(cond)                                                        \
    do {                                                                   \
        if (!(cond)) {                                                     \
            fprintf(stderr, "line %d: %s\n", __LINE__, #cond);             \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    SwkbEntry *sw = NULL;
    CHECK(swkb_entry_new("square-well", NULL, NULL, 0, 1.0, 0.5, &sw) == SWKB_STATUS_OK);

    double e3 = 0.0;
    CHECK(swkb_spectrum_level(sw, 3, &e3) == SWKB_STATUS_OK);
    CHECK(fabs(e3 - 15.0) < 1e-12);

    double eta = 0.0;
    CHECK(swkb_eta_from_action(sw, &eta) == SWKB_STATUS_OK);
    CHECK(fabs(eta - 1.0) < 1e-8);

    double s = 0.0;
    CHECK(swkb_action_integral(sw, 8.0, SWKB_TARGET_WSQ, &s, NULL) == SWKB_STATUS_OK);
    CHECK(fabs(s - 4.0 * M_PI) < 1e-9);

    const char *keys[] = {"l"};
    double values[] = {1.0};
    SwkbEntry *r1 = NULL;
    CHECK(swkb_entry_new("radial-ho", keys, values, 1, 1.0, 0.5, &r1) == SWKB_STATUS_OK);
    CHECK(swkb_eta_closed(r1, &eta) == SWKB_STATUS_OK);
    CHECK(fabs(eta - 0.5428932188134525) < 1e-12);

    SwkbEntry *bad = NULL;
    CHECK(swkb_entry_new("bogus", NULL, NULL, 0, 1.0, 0.5, &bad) == SWKB_STATUS_UNKNOWN_ENTRY);
    CHECK(bad == NULL);
    CHECK(strstr(swkb_last_error_message(), "bogus") != NULL);

    char *json = NULL;
    CHECK(swkb_verify_json(sw, 3, &json) == SWKB_STATUS_OK);
    CHECK(strstr(json, "\"kind\":\"swkb\"") != NULL);
    swkb_string_free(json);

    swkb_entry_free(r1);
    swkb_entry_free(sw);
    printf("ok %s\n", swkb_version());
    return 0;
}
