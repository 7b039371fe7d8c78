int main() {
    int a[5];
    int *p;
    int s;
    int i;
    for (i = 0; i < 5; i = i + 1) {
        a[i] = i + 1;
    }
    p = &a[0];
    s = *(p + 1) + *(p + 4);
    p = p + 2;
    s = s + *p + *(p - 1);
    return s;
}
