int find(int *a, int n, int key) {
    int lo;
    int hi;
    int mid;
    lo = 0;
    hi = n - 1;
    while (lo <= hi) {
        mid = (lo + hi) / 2;
        if (a[mid] == key) {
            return mid;
        }
        if (a[mid] < key) {
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    return -1;
}
int main() {
    int a[7];
    int i;
    for (i = 0; i < 7; i = i + 1) {
        a[i] = i * i;
    }
    return find(a, 7, 16) * 100 + find(a, 7, 3) + 1;
}
