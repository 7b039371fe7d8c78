extern void beat(int n);
int main() {
    int i;
    i = 0;
    while (1) {
        i = i + 1;
        beat(i);
    }
    return 0;
}
