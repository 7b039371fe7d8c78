int main() {
    int i;
    int s;
    i = 0;
    s = 0;
    while (i < 100) {
        s = s + i;
        if (s > 15) {
            break;
        }
        i = i + 1;
    }
    return s + i;
}
