extern int pulse(void);
int main() {
    int i;
    int s;
    s = 0;
    for (i = 0; i < 7; i = i + 1) {
        s = s * 2 + pulse();
    }
    return s;
}
