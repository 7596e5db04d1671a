/* matrixcode_rt.h: runtime support for code emitted by matrixcode.
 *
 * Streams travel through a Trinity handle (two input streams, one output
 * stream) and tapes through a Tape handle.  Every stream test or transfer
 * bumps a call counter so compiled code can be compared against the
 * interpreter's counters.  Single-header, C99.
 */
#ifndef MATRIXCODE_RT_H
#define MATRIXCODE_RT_H

#include <assert.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

typedef struct {
    const int64_t *data;
    size_t len;
    size_t pos; /* consumed prefix */
} McIn;

typedef struct {
    int64_t *data;
    size_t len;
    size_t cap;
} McOut;

typedef struct {
    McIn left;
    McIn right;
    McOut out;
    long n_getL, n_getR, n_putL, n_putR;
} Trinity;

static void mc_trinity_init(Trinity *t,
                            const int64_t *left, size_t nleft,
                            const int64_t *right, size_t nright,
                            int64_t *outbuf, size_t outcap) {
    t->left = (McIn){left, nleft, 0};
    t->right = (McIn){right, nright, 0};
    t->out = (McOut){outbuf, 0, outcap};
    t->n_getL = t->n_getR = t->n_putL = t->n_putR = 0;
}

static bool mc_getL(Trinity *t, int64_t *x) {
    t->n_getL++;
    if (t->left.pos >= t->left.len) return false;
    if (x) *x = t->left.data[t->left.pos];
    return true;
}

static bool mc_getR(Trinity *t, int64_t *x) {
    t->n_getR++;
    if (t->right.pos >= t->right.len) return false;
    if (x) *x = t->right.data[t->right.pos];
    return true;
}

static void mc_put(McIn *src, McOut *out) {
    assert(src->pos < src->len && "put on an empty stream");
    assert(out->len < out->cap && "output stream overflow");
    out->data[out->len++] = src->data[src->pos++];
}

static void mc_putL(Trinity *t) { t->n_putL++; mc_put(&t->left, &t->out); }
static void mc_putR(Trinity *t) { t->n_putR++; mc_put(&t->right, &t->out); }

/* Tape: window of squares [lo, lo+size) stored densely, grown on demand.
 * Writing puts a symbol on the scanned square and then moves the head one
 * square per the current direction ('L' -1, 'R' +1, 'd' 0). */
typedef struct {
    char *cells;
    long lo;
    long size;
    long head;
    char dir;
    char blank;
} Tape;

static void mc_tape_init(Tape *t, const char *text, long head, char dir, char blank) {
    long n = (long)strlen(text);
    t->size = n > 0 ? n : 1;
    t->cells = (char *)malloc((size_t)t->size);
    memset(t->cells, blank, (size_t)t->size);
    memcpy(t->cells, text, (size_t)n);
    t->lo = 0;
    t->head = head;
    t->dir = dir;
    t->blank = blank;
}

static void mc_tape_reserve(Tape *t, long i) {
    if (i >= t->lo && i < t->lo + t->size) return;
    long lo = t->lo, hi = t->lo + t->size;
    long nlo = i < lo ? i - 16 : lo;
    long nhi = i >= hi ? i + 17 : hi;
    char *cells = (char *)malloc((size_t)(nhi - nlo));
    memset(cells, t->blank, (size_t)(nhi - nlo));
    memcpy(cells + (lo - nlo), t->cells, (size_t)t->size);
    free(t->cells);
    t->cells = cells;
    t->lo = nlo;
    t->size = nhi - nlo;
}

static char mc_rd(Tape *t) {
    if (t->head < t->lo || t->head >= t->lo + t->size) return t->blank;
    return t->cells[t->head - t->lo];
}

static void mc_wr(Tape *t, char sym) {
    mc_tape_reserve(t, t->head);
    t->cells[t->head - t->lo] = sym;
    if (t->dir == 'L') t->head--;
    else if (t->dir == 'R') t->head++;
}

static void mc_dir(Tape *t, char dir) { t->dir = dir; }

static void mc_tape_free(Tape *t) { free(t->cells); t->cells = NULL; }

#endif /* MATRIXCODE_RT_H */
