int main() {
    int i;
    int s;
    i = 0;
    s = 0;
    do {
        i = i + 1;
        if (i == 3) {
            continue;
        }
        s = s + i;
    } while (i < 6);
    return s;
}
