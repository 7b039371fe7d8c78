extern int poll(void);
int level = 0;
void adjust(int d) {
    level = level + d;
    if (level < 0) {
        level = 0;
    }
}
int main() {
    int i;
    int v;
    for (i = 0; i < 5; i = i + 1) {
        v = poll();
        if (v > 0) {
            adjust(v);
        } else {
            adjust(-1 * (i + 1));
        }
    }
    return level;
}
