/* Reports and certifies the leakage of a binary symmetric channel.
 *
 * Build from the workspace root:
 *   cargo build -p lpaudit-capi
 *   cc crates/capi/examples/demo.c -Icrates/capi/include \
 *      -Ltarget/debug -llpaudit_capi -o demo
 *   LD_LIBRARY_PATH=target/debug ./demo
 */

#include <stdio.h>
#include <stdlib.h>

#include "lpaudit.h"

static const char *JOINT =
    "{\"axes\": ["
    "  {\"name\": \"x\", \"symbols\": [\"0\", \"1\"]},"
    "  {\"name\": \"y\", \"symbols\": [\"0\", \"1\"]}],"
    " \"probs\": [[0.45, 0.05], [0.1, 0.4]]}";

static void check(LpStatus status, const char *what) {
    if (status != LP_STATUS_OK) {
        fprintf(stderr, "%s: %s\n", what, lp_last_error_message());
        exit(1);
    }
}

int main(void) {
    printf("lpaudit %s\n", lp_version());

    LpJoint *joint = NULL;
    check(lp_joint_parse_json(JOINT, &joint), "parse joint");

    LpChannel *channel = NULL;
    check(lp_channel_bsc(0.25, &channel), "build channel");

    LpReport *report = NULL;
    check(lp_report_compute(joint, channel, &report), "compute report");
    printf("gamma_lpp   %.6f bits\n", lp_report_gamma_lpp(report));
    printf("epsilon_ldp %.6f bits\n", lp_report_epsilon_ldp(report));
    printf("consistency %s\n", lp_report_flags_pass(report) ? "ok" : "VIOLATED");

    bool pass = false;
    double achieved = 0.0;
    check(lp_certify(joint, channel, 0.6, 1e-9, &pass, &achieved),
          "certify");
    printf("budget 0.6  %s (achieved %.6f)\n", pass ? "PASS" : "FAIL",
           achieved);

    lp_report_free(report);
    lp_channel_free(channel);
    lp_joint_free(joint);
    return 0;
}
